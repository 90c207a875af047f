"""Post-processing of worst scenarios: minimal capacities and interior-arc forests."""

from __future__ import annotations

from .mcf import InconsistentInputError, make_complementary, optimality_potentials
from .model import Flow, Instance, Scenario, validate_flow


def minimal_capacities(instance: Instance, scenario: Scenario, flow: Flow) -> Scenario:
    """Shrink every capacity to ``max(lower, x)``; the flow stays optimal at equal cost."""
    return Scenario(tuple(max(a.lower, flow[a.id]) for a in instance.arcs))


def interior_arcs(instance: Instance, scenario: Scenario) -> frozenset[int]:
    return frozenset(a.id for a in instance.arcs if a.lower < scenario[a.id] < a.upper)


def find_cycle(instance: Instance, arc_ids) -> list[tuple[int, int]] | None:
    """First undirected cycle among ``arc_ids`` as ``[(arc id, +1|-1), ...]``.

    Depth-first search from the lowest node, neighbours in ascending arc-id
    order. The sign says whether the traversal follows the arc direction.
    Parallel arcs form 2-cycles.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(arc_ids):
        a = instance.arcs[e]
        adj.setdefault(a.tail, []).append((e, a.head))
        adj.setdefault(a.head, []).append((e, a.tail))

    visited: set[int] = set()
    for root in sorted(adj):
        if root in visited:
            continue
        # parent_edge[v] = (arc id, node it was reached from)
        parent_edge: dict[int, tuple[int, int] | None] = {root: None}
        depth = {root: 0}
        visited.add(root)
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for e, w in it:
                if parent_edge[v] is not None and parent_edge[v][0] == e:
                    continue
                if w in depth:
                    return _close_cycle(instance, parent_edge, v, w, e)
                parent_edge[w] = (e, v)
                depth[w] = depth[v] + 1
                visited.add(w)
                stack.append((w, iter(adj[w])))
                break
            else:
                stack.pop()
                del depth[v]  # finished nodes cannot close a cycle in an undirected DFS
    return None


def _close_cycle(instance, parent_edge, v, w, back_edge):
    # tree path w -> ... -> v, then back edge v -> w
    nodes = [v]
    while nodes[-1] != w:
        nodes.append(parent_edge[nodes[-1]][1])
    nodes.reverse()
    steps = []
    for a, b in zip(nodes, nodes[1:]):
        e = parent_edge[b][0]
        steps.append((e, 1 if instance.arcs[e].tail == a else -1))
    steps.append((back_edge, 1 if instance.arcs[back_edge].tail == v else -1))
    return steps


def cycle_cost(instance: Instance, cycle) -> int:
    return sum(d * instance.arcs[e].cost for e, d in cycle)


def is_forest(instance: Instance, arc_ids) -> bool:
    return find_cycle(instance, arc_ids) is None


def extremalize_to_forest(
    instance: Instance, scenario: Scenario, flow: Flow
) -> tuple[Scenario, Flow]:
    """Move interior capacities to bounds until the interior arcs form a forest.

    The input flow must be optimal for ``scenario``; it is first made
    complementary and the scenario minimal. Each round cancels one cycle of
    interior arcs by the largest shift keeping every cycle arc inside its
    interval, then pins those capacities to the new flow. The flow stays
    optimal throughout. Cycles of worst scenarios have zero cost, so the
    cost is unchanged for worst-case input; otherwise each shift is oriented
    so that the cost cannot decrease.
    """
    report = validate_flow(instance, scenario, flow)
    if not report:
        raise InconsistentInputError(f"invalid flow: {report}")
    if optimality_potentials(instance, scenario, flow) is None:
        raise InconsistentInputError("flow is not optimal for the scenario")

    flow = make_complementary(instance, flow)
    x = list(flow.values)
    u = list(minimal_capacities(instance, scenario, flow))
    arcs = instance.arcs

    for _ in range(instance.num_arcs + 1):
        interior = [a.id for a in arcs if a.lower < u[a.id] < a.upper]
        cycle = find_cycle(instance, interior)
        if cycle is None:
            break
        if cycle_cost(instance, cycle) < 0:
            cycle = [(e, -d) for e, d in reversed(cycle)]
        delta = min(arcs[e].upper - x[e] if d > 0 else x[e] - arcs[e].lower for e, d in cycle)
        if delta <= 0:
            raise InconsistentInputError("interior cycle admits no shift; scenario not minimal")
        for e, d in cycle:
            x[e] += d * delta
            u[e] = x[e]
    else:
        raise InconsistentInputError("cycle cancelling did not terminate")

    return Scenario(tuple(u)), Flow.from_values(instance, x)

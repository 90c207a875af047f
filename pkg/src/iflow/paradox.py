"""More-for-less paradox: worst-value profiles, witnesses and constructions.

The paradox occurs when the worst optimal value drops as the requested
flow grows, ``c_w(f + 1) < c_w(f)``. Any occurrence comes with a flow and
an augmenting path of negative cost; conversely such a path can be turned
into interval capacities exhibiting the paradox. On complete digraphs the
flow can be dropped and a negative "improving path" of the bare graph is
enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .mcf import max_flow_value
from .model import Flow, Instance, Scenario, node_balance
from .oracle import WorstResult, worst_value_bruteforce
from .spdp import NotSeriesParallel, worst_value_sp

COMPLETE_LIMIT = 12


@dataclass(frozen=True)
class AugmentingPath:
    """Undirected s-t path; direction +1 follows the arc, -1 runs against it."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(e), int(d)) for e, d in self.steps))

    def signed_cost(self, instance: Instance) -> int:
        return sum(d * instance.arcs[e].cost for e, d in self.steps)

    def nodes(self, instance: Instance) -> list[int]:
        out = [instance.source]
        for e, d in self.steps:
            a = instance.arcs[e]
            start, end = (a.tail, a.head) if d > 0 else (a.head, a.tail)
            if start != out[-1]:
                raise ValueError(f"step on arc {e} does not continue from node {out[-1]}")
            out.append(end)
        return out

    def describe(self, instance: Instance) -> str:
        parts = []
        for e, d in self.steps:
            a = instance.arcs[e]
            tag = "fwd" if d > 0 else "bwd"
            parts.append(f"({a.tail},{a.head}) {tag}")
        return ", ".join(parts)


ImprovingPath = AugmentingPath


@dataclass(frozen=True)
class ParadoxReport:
    f: int
    c_w_at_f: int
    c_w_at_f_plus_1: int
    witness: AugmentingPath | None = None
    base_flow: Flow | None = None
    scenario: Scenario | None = None
    note: str = ""


def path_problems(
    instance: Instance, path: AugmentingPath, flow: Flow | None = None, scenario=None
) -> list[str]:
    """Why ``path`` is not a simple s-t augmenting path (empty if it is)."""
    try:
        nodes = path.nodes(instance)
    except ValueError as exc:
        return [str(exc)]
    problems = []
    if not path.steps:
        problems.append("empty path")
    if nodes[-1] != instance.sink:
        problems.append(f"path ends at {nodes[-1]}, not at the sink")
    if len(set(nodes)) != len(nodes):
        problems.append("path revisits a node")
    if flow is not None:
        for e, d in path.steps:
            if d < 0 and flow[e] <= 0:
                problems.append(f"backward arc {e} carries no flow")
            if d > 0 and scenario is not None and flow[e] >= scenario[e]:
                problems.append(f"forward arc {e} is saturated")
    return problems


def worst_value(instance: Instance, method: str = "auto", budget: int | None = None) -> int | None:
    if method in ("auto", "sp"):
        try:
            return worst_value_sp(instance)
        except NotSeriesParallel:
            if method == "sp":
                raise
    res = worst_value_bruteforce(instance, budget=budget)
    return None if res is None else res.c_w


def worst_value_profile(
    instance: Instance, f_max: int | None = None, method: str = "auto", budget: int | None = None
) -> list[tuple[int, int | None]]:
    """``(f, c_w)`` for f = 1..f_max; None marks an infeasible amount."""
    if f_max is None:
        f_max = max_flow_value(instance, instance.upper_scenario())
    return [(f, worst_value(instance.with_flow(f), method, budget)) for f in range(1, f_max + 1)]


def _decompose_difference(instance: Instance, diff: Sequence[int]):
    """Split a signed unit s-t flow into cycles and one path.

    Cycles are peeled first, always taking the lowest arc id available.
    Returns ``(path, cycles)`` with cycles as lists of (arc, dir).
    """
    amount = {e: abs(v) for e, v in enumerate(diff) if v}
    sign = {e: (1 if v > 0 else -1) for e, v in enumerate(diff) if v}

    def ends(e):
        a = instance.arcs[e]
        return (a.tail, a.head) if sign[e] > 0 else (a.head, a.tail)

    def out_edges(v):
        return [e for e in sorted(amount) if amount[e] > 0 and ends(e)[0] == v]

    cycles = []
    while True:
        cycle = _find_directed_cycle(instance, [e for e in sorted(amount) if amount[e] > 0], ends)
        if cycle is None:
            break
        k = min(amount[e] for e in cycle)
        for e in cycle:
            amount[e] -= k
        cycles.append([(e, sign[e]) for e in cycle])

    path, v, seen = [], instance.source, {instance.source}
    while v != instance.sink:
        out = out_edges(v)
        if not out:
            return None, cycles
        e = out[0]
        amount[e] -= 1
        path.append((e, sign[e]))
        v = ends(e)[1]
        if v in seen:
            return None, cycles
        seen.add(v)
    return AugmentingPath(tuple(path)), cycles


def _find_directed_cycle(instance, edge_ids, ends):
    adj: dict[int, list[int]] = {}
    for e in edge_ids:
        adj.setdefault(ends(e)[0], []).append(e)
    color: dict[int, int] = {}
    for root in sorted(adj):
        if color.get(root):
            continue
        color[root] = 1
        stack = [(root, iter(adj.get(root, [])))]
        via: dict[int, int] = {}
        while stack:
            v, it = stack[-1]
            for e in it:
                w = ends(e)[1]
                if color.get(w) == 1:
                    cycle = [e]
                    x = v
                    while x != w:
                        cycle.append(via[x])
                        x = ends(via[x])[0]
                    cycle.reverse()
                    return cycle
                if not color.get(w):
                    color[w] = 1
                    via[w] = e
                    stack.append((w, iter(adj.get(w, []))))
                    break
            else:
                color[v] = 2
                stack.pop()
    return None


def augmenting_paths(instance: Instance, flow: Flow, scenario: Scenario):
    """Yield every simple s-t augmenting path for ``flow`` under ``scenario``."""
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in instance.nodes}
    for a in instance.arcs:
        if flow[a.id] < scenario[a.id]:
            adj[a.tail].append((a.id, 1, a.head))
        if flow[a.id] > 0:
            adj[a.head].append((a.id, -1, a.tail))
    for v in adj:
        adj[v].sort()

    t = instance.sink
    path: list[tuple[int, int]] = []
    on_path = {instance.source}

    def walk(v):
        if v == t:
            yield AugmentingPath(tuple(path))
            return
        for e, d, w in adj[v]:
            if w in on_path:
                continue
            on_path.add(w)
            path.append((e, d))
            yield from walk(w)
            path.pop()
            on_path.discard(w)

    yield from walk(instance.source)


def most_negative_augmenting_path(instance, flow, scenario) -> AugmentingPath | None:
    best, best_cost = None, 0
    for p in augmenting_paths(instance, flow, scenario):
        c = p.signed_cost(instance)
        if c < best_cost:
            best, best_cost = p, c
    return best


def paradox_witness(
    instance: Instance, low: WorstResult, high: WorstResult
) -> tuple[AugmentingPath | None, Scenario, str]:
    """Negative augmenting path for ``low.flow`` under ``max(low, high)`` scenarios."""
    u_star = Scenario(tuple(max(a, b) for a, b in zip(low.scenario, high.scenario)))
    diff = [b - a for a, b in zip(low.flow.values, high.flow.values)]
    path, cycles = _decompose_difference(instance, diff)
    if path is not None and path.signed_cost(instance) < 0:
        return path, u_star, ""
    negative = [c for c in cycles if sum(d * instance.arcs[e].cost for e, d in c) < 0]
    note = (
        f"flow difference splits into a path of cost "
        f"{path.signed_cost(instance) if path else 'n/a'} and {len(negative)} negative cycle(s)"
    )
    # fall back to searching all augmenting paths of the base flow
    return most_negative_augmenting_path(instance, low.flow, u_star), u_star, note


def detect_paradox(
    instance: Instance, f_max: int | None = None, budget: int | None = None
) -> ParadoxReport | None:
    """Smallest f with ``c_w(f + 1) < c_w(f)``, with a negative augmenting-path witness."""
    if f_max is None:
        f_max = max_flow_value(instance, instance.upper_scenario())
    prev = None
    for f in range(1, f_max + 1):
        cur = worst_value_bruteforce(instance.with_flow(f), budget=budget)
        if cur is None:
            break
        if prev is not None and cur.c_w < prev.c_w:
            witness, u_star, note = paradox_witness(instance.with_flow(f - 1), prev, cur)
            return ParadoxReport(f - 1, prev.c_w, cur.c_w, witness, prev.flow, u_star, note)
        prev = cur
    return None


def construct_paradox_instance(
    skeleton: Instance, flow: Flow, path: AugmentingPath
) -> Instance:
    """Interval capacities ``[0, max(x, x + path)]`` exhibiting the paradox at f -> f + 1.

    The skeleton supplies the graph and costs; its intervals are ignored.
    """
    f = node_balance(skeleton, flow.values)[skeleton.source]
    problems = path_problems(skeleton.with_flow(f), path, flow)
    if problems:
        raise ValueError("not an augmenting path: " + "; ".join(problems))
    if path.signed_cost(skeleton) >= 0:
        raise ValueError(f"path cost {path.signed_cost(skeleton)} is not negative")
    x_next = list(flow.values)
    for e, d in path.steps:
        x_next[e] += d
    rows = [
        (a.tail, a.head, 0, max(flow[a.id], x_next[a.id]), a.cost) for a in skeleton.arcs
    ]
    return Instance.build(skeleton.num_nodes, rows, skeleton.source, skeleton.sink, f)


# ---------------------------------------------------------------- complete digraphs


def complete_arc_ids(n: int) -> dict[tuple[int, int], int]:
    """Arc id of ``(i, j)`` in the complete digraph, rows in node order."""
    ids, k = {}, 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                ids[(i, j)] = k
                k += 1
    return ids


def complete_instance(
    n: int, costs, s: int, t: int, intervals: dict[tuple[int, int], tuple[int, int]] | None = None,
    f: int = 1,
) -> Instance:
    """Complete digraph with ``costs[i-1][j-1]``; arcs missing from ``intervals`` get [0, 0]."""
    intervals = intervals or {}
    rows = []
    for (i, j) in complete_arc_ids(n):
        lo, hi = intervals.get((i, j), (0, 0))
        rows.append((i, j, lo, hi, costs[i - 1][j - 1]))
    return Instance.build(n, rows, s, t, f)


def _check_complete(n, costs, s, t, limit):
    if n > limit:
        raise ValueError(f"n = {n} exceeds the limit {limit}")
    if n < 2 or not (1 <= s <= n and 1 <= t <= n) or s == t:
        raise ValueError("need n >= 2 and distinct terminals in 1..n")
    if len(costs) != n or any(len(row) != n for row in costs):
        raise ValueError("cost matrix must be n x n")
    if any(costs[i][j] < 0 for i in range(n) for j in range(n) if i != j):
        raise ValueError("costs must be nonnegative")


def _longest_paths(costs, inner):
    """best[(j, i)] = (cost, nodes) of the costliest simple directed path j -> i within ``inner``."""
    idx = {v: p for p, v in enumerate(inner)}
    best = {}
    for j in inner:
        # dp[(mask, v)] = (cost, predecessor) over paths j -> v visiting exactly ``mask``
        dp = {(1 << idx[j], j): (0, None)}
        for mask in range(1, 1 << len(inner)):
            for v in inner:
                state = dp.get((mask, v))
                if state is None:
                    continue
                for w in inner:
                    if mask >> idx[w] & 1:
                        continue
                    key = (mask | 1 << idx[w], w)
                    cand = state[0] + costs[v - 1][w - 1]
                    if key not in dp or cand > dp[key][0]:
                        dp[key] = (cand, v)
        ends = {}
        for (mask, v), (cost, _) in dp.items():
            if v not in ends or cost > ends[v][0]:
                ends[v] = (cost, mask)
        for v, (cost, mask) in ends.items():
            nodes, m, x = [v], mask, v
            while dp[(m, x)][1] is not None:
                prev = dp[(m, x)][1]
                m &= ~(1 << idx[x])
                x = prev
                nodes.append(x)
            best[(j, v)] = (cost, nodes[::-1])
    return best


def most_negative_improving_path_complete(
    n: int, costs, s: int, t: int, limit: int = COMPLETE_LIMIT
) -> tuple[ImprovingPath, int]:
    """Most negative improving s-t path of the complete digraph.

    Such a path can be taken as ``s -> i``, then backward along the
    costliest directed path from j to i, then ``j -> t``; its cost is
    ``c[s,i] - ldp(i, j) + c[j,t]``. The direct arc ``s -> t`` and the
    forward detour ``s -> i -> t`` (i = j) are candidates as well.
    Longest paths are exact, by dynamic programming over node subsets.
    """
    _check_complete(n, costs, s, t, limit)
    ids = complete_arc_ids(n)
    inner = [v for v in range(1, n + 1) if v not in (s, t)]
    c = lambda a, b: costs[a - 1][b - 1]  # noqa: E731

    candidates = [(c(s, t), ((ids[(s, t)], 1),))]
    for (j, i), (ldp, nodes) in _longest_paths(costs, inner).items():
        steps = [(ids[(s, i)], 1)]
        # nodes run j -> ... -> i; walk them back from i to j against the arcs
        for a, b in reversed(list(zip(nodes, nodes[1:]))):
            steps.append((ids[(a, b)], -1))
        steps.append((ids[(j, t)], 1))
        candidates.append((c(s, i) - ldp + c(j, t), tuple(steps)))
    cost, steps = min(candidates, key=lambda cand: (cand[0], len(cand[1]), cand[1]))
    return ImprovingPath(steps), cost


def is_immune(n: int, costs, s: int, t: int, limit: int = COMPLETE_LIMIT) -> bool:
    return most_negative_improving_path_complete(n, costs, s, t, limit)[1] >= 0


def paradox_instance_complete(n: int, costs, s: int, t: int, limit: int = COMPLETE_LIMIT):
    """Interval capacities on the complete digraph built from its most negative improving path.

    For every backward arc ``(a, b)`` of the path one unit is routed
    ``s -> a -> b -> t``; arcs used by these units or by the path get
    [0, 1], the rest [0, 0]. Returns ``(instance, path)`` with f equal to the
    number of backward arcs, or None when the costs are immune.
    """
    path, cost = most_negative_improving_path_complete(n, costs, s, t, limit)
    if cost >= 0:
        return None
    ids = complete_arc_ids(n)
    by_id = {v: k for k, v in ids.items()}
    used = {by_id[e] for e, _ in path.steps}
    backward = [by_id[e] for e, d in path.steps if d < 0]
    for a, b in backward:
        used |= {(s, a), (a, b), (b, t)}
    inst = complete_instance(n, costs, s, t, {arc: (0, 1) for arc in used}, f=len(backward))
    return inst, path

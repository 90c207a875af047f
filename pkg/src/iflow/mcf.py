"""Exact integral minimum cost flow for one fixed scenario.

Successive shortest augmenting paths with node potentials. Costs are
nonnegative, so the initial potentials are zero and every Dijkstra run
works on nonnegative reduced costs.

Potentials follow the convention ``cpi_e = c_e - pi[tail] + pi[head]``;
a flow is optimal iff ``cpi_e > 0 => x_e = 0`` and ``cpi_e < 0 => x_e = u_e``.
Returned potentials are grounded at ``pi[source] = 0``.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .model import Flow, Instance, Report, Scenario, validate_flow

Potentials = dict  # node id -> int


class InconsistentInputError(ValueError):
    """Input violates a precondition that an optimal flow would satisfy."""


@dataclass(frozen=True)
class Solution:
    flow: Flow
    potentials: Potentials

    @property
    def cost(self) -> int:
        return self.flow.total_cost


def _residual_adjacency(instance: Instance):
    """out[v] -> [(arc id, +1 forward | -1 backward)] in arc-id order."""
    out = {v: [] for v in instance.nodes}
    for arc in instance.arcs:
        out[arc.tail].append((arc.id, 1))
        out[arc.head].append((arc.id, -1))
    return out


def reduced_costs(instance: Instance, pi: Potentials) -> list[int]:
    return [a.cost - pi[a.tail] + pi[a.head] for a in instance.arcs]


def max_flow_value(instance: Instance, scenario: Scenario | Sequence[int]) -> int:
    """Maximum s-t flow value under the given capacities (Edmonds-Karp)."""
    caps = list(scenario)
    arcs = instance.arcs
    adj = _residual_adjacency(instance)
    s, t = instance.source, instance.sink
    x = [0] * len(arcs)
    total = 0
    while True:
        pred = {s: None}
        queue = deque([s])
        while queue and t not in pred:
            v = queue.popleft()
            for e, d in adj[v]:
                w = arcs[e].head if d > 0 else arcs[e].tail
                if w in pred:
                    continue
                if (caps[e] - x[e] if d > 0 else x[e]) > 0:
                    pred[w] = (e, d, v)
                    queue.append(w)
        if t not in pred:
            return total
        path = []
        v = t
        while pred[v] is not None:
            e, d, v = pred[v]
            path.append((e, d))
        delta = min(caps[e] - x[e] if d > 0 else x[e] for e, d in path)
        for e, d in path:
            x[e] += d * delta
        total += delta


def _shortest_paths(instance, adj, caps, x, p):
    """Dijkstra on reduced costs; ties resolved towards the lower arc id."""
    arcs = instance.arcs
    s = instance.source
    dist = {s: 0}
    pred: dict[int, tuple[int, int, int]] = {}
    done = set()
    heap = [(0, s)]
    while heap:
        d_v, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for e, d in adj[v]:
            arc = arcs[e]
            if d > 0:
                if caps[e] - x[e] <= 0:
                    continue
                w, c = arc.head, arc.cost
            else:
                if x[e] <= 0:
                    continue
                w, c = arc.tail, -arc.cost
            if w in done:
                continue
            nd = d_v + c + p[v] - p[w]
            old = dist.get(w)
            if old is None or nd < old or (nd == old and e < pred[w][0]):
                dist[w] = nd
                pred[w] = (e, d, v)
                heapq.heappush(heap, (nd, w))
    return dist, pred


def _ssp(instance: Instance, caps: Sequence[int]):
    """Run successive shortest paths; None when f units cannot be sent."""
    arcs = instance.arcs
    adj = _residual_adjacency(instance)
    p = {v: 0 for v in instance.nodes}
    x = [0] * len(arcs)
    remaining = instance.flow_amount
    t = instance.sink
    while remaining > 0:
        dist, pred = _shortest_paths(instance, adj, caps, x, p)
        if t not in dist:
            return None
        far = max(dist.values())
        for v in p:
            p[v] += dist.get(v, far)
        path = []
        v = t
        while v != instance.source:
            e, d, v = pred[v]
            path.append((e, d))
        delta = min(min(caps[e] - x[e] if d > 0 else x[e] for e, d in path), remaining)
        for e, d in path:
            x[e] += d * delta
        remaining -= delta
    pi = {v: p[instance.source] - p[v] for v in p}
    return x, pi


def min_cost_flow(instance: Instance, scenario: Scenario | Sequence[int]) -> Solution | None:
    """Optimal integral flow of size f with certifying potentials, or None if infeasible."""
    caps = list(scenario)
    if max_flow_value(instance, caps) < instance.flow_amount:
        return None
    x, pi = _ssp(instance, caps)
    return Solution(Flow.from_values(instance, x), pi)


def min_cost(instance: Instance, scenario: Scenario | Sequence[int]) -> int | None:
    """Optimal cost only; skips the separate max-flow feasibility pass."""
    res = _ssp(instance, list(scenario))
    if res is None:
        return None
    return instance.total_cost(res[0])


def certify_optimality(
    instance: Instance, scenario: Scenario, flow: Flow, potentials: Potentials
) -> Report:
    report = validate_flow(instance, scenario, flow)
    for arc, cpi in zip(instance.arcs, reduced_costs(instance, potentials)):
        x, u = flow[arc.id], scenario[arc.id]
        if cpi > 0 and x > 0:
            report.add(f"arc {arc.id}: reduced cost {cpi} > 0 but flow {x} > 0", arc=arc.id)
        elif cpi < 0 and x < u:
            report.add(
                f"arc {arc.id}: reduced cost {cpi} < 0 but flow {x} below capacity {u}",
                arc=arc.id,
            )
    return report


def optimality_potentials(
    instance: Instance, scenario: Scenario | Sequence[int], flow: Flow
) -> Potentials | None:
    """Potentials certifying ``flow`` via Bellman-Ford on its residual graph.

    Returns None when the residual graph has a negative cycle (flow not optimal).
    """
    caps = list(scenario)
    edges = []
    for arc in instance.arcs:
        x = flow[arc.id]
        if x < caps[arc.id]:
            edges.append((arc.tail, arc.head, arc.cost))
        if x > 0:
            edges.append((arc.head, arc.tail, -arc.cost))
    dist = {v: 0 for v in instance.nodes}
    for _ in range(instance.num_nodes):
        changed = False
        for a, b, c in edges:
            if dist[a] + c < dist[b]:
                dist[b] = dist[a] + c
                changed = True
        if not changed:
            break
    else:
        return None
    s = instance.source
    return {v: dist[s] - dist[v] for v in instance.nodes}


def make_complementary(instance: Instance, flow: Flow) -> Flow:
    """Cancel flow running both ways between a node pair.

    Only zero-cost opposite arcs may carry flow both ways in an optimal
    flow, so cancelling never changes the cost; a cost change raises.
    """
    x = list(flow.values)
    by_pair: dict[tuple[int, int], list] = {}
    for arc in instance.arcs:
        by_pair.setdefault((arc.tail, arc.head), []).append(arc)
    for (i, j), forward in sorted(by_pair.items()):
        if i > j or (j, i) not in by_pair:
            continue
        backward = by_pair[(j, i)]
        for a in forward:
            for b in backward:
                eps = min(x[a.id], x[b.id])
                if eps <= 0:
                    continue
                if a.cost or b.cost:
                    raise InconsistentInputError(
                        f"arcs {a.id} and {b.id} carry flow both ways at positive cost; "
                        "flow is not optimal"
                    )
                x[a.id] -= eps
                x[b.id] -= eps
    return Flow.from_values(instance, x)


def is_complementary(instance: Instance, flow: Flow) -> bool:
    used = {(a.tail, a.head) for a in instance.arcs if flow[a.id] > 0}
    return not any((j, i) in used for i, j in used)

"""Domain types for s-t minimum cost flow with interval arc capacities.

All values are integers. Nodes are labelled 1..n, arcs are identified by
their position in ``Instance.arcs``; parallel and antiparallel arcs are
distinct arcs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntervalCapacity:
    lower: int
    upper: int

    @property
    def crisp(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    cost: int
    capacity: IntervalCapacity

    @property
    def lower(self) -> int:
        return self.capacity.lower

    @property
    def upper(self) -> int:
        return self.capacity.upper


@dataclass(frozen=True)
class Instance:
    num_nodes: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    flow_amount: int

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))

    @classmethod
    def build(
        cls,
        num_nodes: int,
        arcs: Iterable[tuple[int, int, int, int, int]],
        source: int,
        sink: int,
        flow_amount: int,
    ) -> Instance:
        """Build an instance from ``(tail, head, lower, upper, cost)`` rows."""
        return cls(
            num_nodes,
            tuple(
                Arc(i, tail, head, cost, IntervalCapacity(lo, hi))
                for i, (tail, head, lo, hi, cost) in enumerate(arcs)
            ),
            source,
            sink,
            flow_amount,
        )

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    @property
    def nodes(self) -> range:
        return range(1, self.num_nodes + 1)

    def with_flow(self, flow_amount: int) -> Instance:
        return replace(self, flow_amount=flow_amount)

    def lower_scenario(self) -> Scenario:
        return Scenario(tuple(a.lower for a in self.arcs))

    def upper_scenario(self) -> Scenario:
        return Scenario(tuple(a.upper for a in self.arcs))

    def box_size(self) -> int:
        """Number of integral scenarios in the capacity box."""
        count = 1
        for a in self.arcs:
            count *= a.upper - a.lower + 1
        return count

    def total_cost(self, values: Sequence[int]) -> int:
        return sum(a.cost * v for a, v in zip(self.arcs, values))


@dataclass(frozen=True)
class Scenario:
    capacities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(self.capacities))

    def __len__(self) -> int:
        return len(self.capacities)

    def __getitem__(self, e: int) -> int:
        return self.capacities[e]

    def __iter__(self):
        return iter(self.capacities)


@dataclass(frozen=True)
class Flow:
    values: tuple[int, ...]
    total_cost: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def from_values(cls, instance: Instance, values: Sequence[int]) -> Flow:
        return cls(tuple(values), instance.total_cost(values))

    def __getitem__(self, e: int) -> int:
        return self.values[e]


@dataclass
class Report:
    """Outcome of a check. Truthy when no problem was found."""

    problems: list[str] = field(default_factory=list)
    arcs: list[int] = field(default_factory=list)
    nodes: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok

    def add(self, problem: str, arc: int | None = None, node: int | None = None):
        self.problems.append(problem)
        if arc is not None:
            self.arcs.append(arc)
        if node is not None:
            self.nodes.append(node)

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.problems)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def validate_instance(instance: Instance) -> Report:
    """Check the structural invariants; the report names the first violation.

    ``flow_amount == 0`` is accepted as the trivial problem (worst value 0).
    """
    report = Report()
    n = instance.num_nodes
    if not _is_int(n) or n < 2:
        report.add(f"node count must be an integer >= 2, got {n!r}")
        return report
    s, t = instance.source, instance.sink
    if not (_is_int(s) and 1 <= s <= n):
        report.add(f"source {s!r} out of range 1..{n}", node=s)
        return report
    if not (_is_int(t) and 1 <= t <= n):
        report.add(f"sink {t!r} out of range 1..{n}", node=t)
        return report
    if s == t:
        report.add("source equals sink", node=s)
        return report
    f = instance.flow_amount
    if not _is_int(f) or f < 0:
        report.add(f"flow amount must be a nonnegative integer, got {f!r}")
        return report

    touched = set()
    for pos, arc in enumerate(instance.arcs):
        if arc.id != pos:
            report.add(f"arc id {arc.id} at position {pos}", arc=pos)
            return report
        values = (arc.tail, arc.head, arc.cost, arc.lower, arc.upper)
        if not all(_is_int(v) for v in values):
            report.add(f"arc {pos}: non-integer data", arc=pos)
            return report
        if not (1 <= arc.tail <= n and 1 <= arc.head <= n):
            report.add(f"arc {pos}: endpoint out of range 1..{n}", arc=pos)
            return report
        if arc.tail == arc.head:
            report.add(f"arc {pos}: self-loop at node {arc.tail}", arc=pos)
            return report
        if arc.cost < 0:
            report.add(f"arc {pos}: negative cost", arc=pos)
            return report
        if arc.lower < 0:
            report.add(f"arc {pos}: negative capacity bound", arc=pos)
            return report
        if arc.lower > arc.upper:
            report.add(f"arc {pos}: interval bounds crossed", arc=pos)
            return report
        touched.add(arc.tail)
        touched.add(arc.head)

    for v in instance.nodes:
        if v not in touched:
            report.add(f"node {v} has no incident arc", node=v)
            return report
    return report


def validate_scenario(instance: Instance, scenario: Scenario) -> Report:
    report = Report()
    if len(scenario) != instance.num_arcs:
        report.add(f"scenario has {len(scenario)} values, instance has {instance.num_arcs} arcs")
        return report
    for arc, u in zip(instance.arcs, scenario):
        if not _is_int(u):
            report.add(f"arc {arc.id}: non-integer capacity", arc=arc.id)
        elif not arc.lower <= u <= arc.upper:
            report.add(
                f"arc {arc.id}: capacity {u} out of interval [{arc.lower},{arc.upper}]",
                arc=arc.id,
            )
    return report


def node_balance(instance: Instance, values: Sequence[int]) -> dict[int, int]:
    """Net outflow per node."""
    net = {v: 0 for v in instance.nodes}
    for arc, x in zip(instance.arcs, values):
        net[arc.tail] += x
        net[arc.head] -= x
    return net


def validate_flow(instance: Instance, scenario: Scenario, flow: Flow) -> Report:
    report = Report()
    if len(flow.values) != instance.num_arcs:
        report.add(f"flow has {len(flow.values)} values, instance has {instance.num_arcs} arcs")
        return report
    f = instance.flow_amount
    net = node_balance(instance, flow.values)
    for v, b in net.items():
        want = f if v == instance.source else -f if v == instance.sink else 0
        if b != want:
            kind = "source" if v == instance.source else "sink" if v == instance.sink else "node"
            report.add(f"{kind} balance at node {v}: net outflow {b}, expected {want}", node=v)
    for arc, x, u in zip(instance.arcs, flow.values, scenario):
        if x < 0:
            report.add(f"arc {arc.id}: negative flow {x}", arc=arc.id)
        elif x > u:
            report.add(f"arc {arc.id}: flow {x} exceeds capacity {u}", arc=arc.id)
    cost = instance.total_cost(flow.values)
    if cost != flow.total_cost:
        report.add(f"total cost {flow.total_cost} does not match recomputed {cost}")
    return report

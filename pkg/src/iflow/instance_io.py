"""Extended-DIMACS text format for instances and scenarios.

Instance file::

    c <comment>
    p iflow <n> <m> <f>
    n <node> s
    n <node> t
    a <tail> <head> <lower> <upper> <cost>     (m lines, arc id = order)

Scenario file::

    c <comment>
    s iflow <m>
    u <arc_id> <capacity>                      (m lines, each id once)
"""

from __future__ import annotations

from typing import Iterable, TextIO

from .model import Arc, Instance, IntervalCapacity, Scenario, validate_instance, validate_scenario


class FormatError(ValueError):
    """Malformed or semantically invalid file contents."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str | TextIO | Iterable[str]):
    if isinstance(text, str):
        text = text.splitlines()
    for lineno, raw in enumerate(text, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("c ") or line == "c":
            continue
        yield lineno, line.split()


def _int(token: str, lineno: int, what: str, nonneg: bool = True) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{what}: expected integer, got {token!r}", lineno) from None
    if nonneg and value < 0:
        raise FormatError(f"{what}: negative value {value}", lineno)
    return value


def parse_instance(text: str | TextIO | Iterable[str]) -> Instance:
    problem = None
    source = sink = None
    arcs: list[Arc] = []
    last_line = 0

    for lineno, tok in _lines(text):
        last_line = lineno
        kind = tok[0]
        if problem is None and kind != "p":
            raise FormatError("problem line must come first", lineno)
        if kind == "p":
            if problem is not None:
                raise FormatError("duplicate problem line", lineno)
            if len(tok) != 5 or tok[1] != "iflow":
                raise FormatError("expected 'p iflow <n> <m> <f>'", lineno)
            problem = tuple(_int(x, lineno, name) for x, name in zip(tok[2:], ("n", "m", "f")))
        elif kind == "n":
            if len(tok) != 3 or tok[2] not in ("s", "t"):
                raise FormatError("expected 'n <node> s|t'", lineno)
            node = _int(tok[1], lineno, "node")
            if tok[2] == "s":
                if source is not None:
                    raise FormatError("duplicate source line", lineno)
                source = node
            else:
                if sink is not None:
                    raise FormatError("duplicate sink line", lineno)
                sink = node
        elif kind == "a":
            if len(tok) != 6:
                raise FormatError("expected 'a <tail> <head> <lower> <upper> <cost>'", lineno)
            tail, head, lo, hi, cost = (
                _int(x, lineno, name)
                for x, name in zip(tok[1:], ("tail", "head", "lower", "upper", "cost"))
            )
            if tail == head:
                raise FormatError(f"self-loop at node {tail}", lineno)
            if lo > hi:
                raise FormatError("interval bounds crossed", lineno)
            if len(arcs) >= problem[1]:
                raise FormatError(f"arc count mismatch: more than {problem[1]} arc lines", lineno)
            arcs.append(Arc(len(arcs), tail, head, cost, IntervalCapacity(lo, hi)))
        else:
            raise FormatError(f"unknown record type {kind!r}", lineno)

    if problem is None:
        raise FormatError("missing problem line")
    n, m, f = problem
    if source is None:
        raise FormatError("missing source line")
    if sink is None:
        raise FormatError("missing sink line")
    if len(arcs) != m:
        raise FormatError(f"arc count mismatch: declared {m}, found {len(arcs)}", last_line)
    instance = Instance(n, tuple(arcs), source, sink, f)
    report = validate_instance(instance)
    if not report:
        raise FormatError(str(report))
    return instance


def write_instance(instance: Instance) -> str:
    out = [
        f"p iflow {instance.num_nodes} {instance.num_arcs} {instance.flow_amount}",
        f"n {instance.source} s",
        f"n {instance.sink} t",
    ]
    out.extend(f"a {a.tail} {a.head} {a.lower} {a.upper} {a.cost}" for a in instance.arcs)
    return "\n".join(out) + "\n"


def parse_scenario(text: str | TextIO | Iterable[str], instance: Instance) -> Scenario:
    m = None
    values: dict[int, int] = {}
    for lineno, tok in _lines(text):
        kind = tok[0]
        if m is None and kind != "s":
            raise FormatError("scenario header must come first", lineno)
        if kind == "s":
            if m is not None:
                raise FormatError("duplicate scenario header", lineno)
            if len(tok) != 3 or tok[1] != "iflow":
                raise FormatError("expected 's iflow <m>'", lineno)
            m = _int(tok[2], lineno, "m")
            if m != instance.num_arcs:
                raise FormatError(
                    f"arc count mismatch: scenario declares {m}, instance has {instance.num_arcs}",
                    lineno,
                )
        elif kind == "u":
            if len(tok) != 3:
                raise FormatError("expected 'u <arc_id> <capacity>'", lineno)
            e = _int(tok[1], lineno, "arc id")
            cap = _int(tok[2], lineno, "capacity")
            if e >= m:
                raise FormatError(f"arc id {e} out of range", lineno)
            if e in values:
                raise FormatError(f"duplicate arc id {e}", lineno)
            arc = instance.arcs[e]
            if not arc.lower <= cap <= arc.upper:
                raise FormatError(
                    f"arc {e}: capacity {cap} out of interval [{arc.lower},{arc.upper}]", lineno
                )
            values[e] = cap
        else:
            raise FormatError(f"unknown record type {kind!r}", lineno)
    if m is None:
        raise FormatError("missing scenario header")
    if len(values) != m:
        raise FormatError(f"arc count mismatch: declared {m}, found {len(values)}")
    scenario = Scenario(tuple(values[e] for e in range(m)))
    report = validate_scenario(instance, scenario)
    if not report:
        raise FormatError(str(report))
    return scenario


def write_scenario(scenario: Scenario) -> str:
    out = [f"s iflow {len(scenario)}"]
    out.extend(f"u {e} {u}" for e, u in enumerate(scenario))
    return "\n".join(out) + "\n"


def write_flow(flow) -> str:
    """Flow values in scenario-file layout, so they can be re-read as capacities."""
    out = [f"c total_cost {flow.total_cost}", f"s iflow {len(flow.values)}"]
    out.extend(f"u {e} {x}" for e, x in enumerate(flow.values))
    return "\n".join(out) + "\n"


def parse_flow(text, instance: Instance):
    """Read a flow written by :func:`write_flow` (values need not lie in the box)."""
    from .model import Flow

    relaxed = Instance(
        instance.num_nodes,
        tuple(Arc(a.id, a.tail, a.head, a.cost, IntervalCapacity(0, 10**18)) for a in instance.arcs),
        instance.source,
        instance.sink,
        instance.flow_amount,
    )
    values = parse_scenario(text, relaxed).capacities
    return Flow.from_values(instance, values)


def write_potentials(pi: dict[int, int] | list[int]) -> str:
    """Node potentials as ``v <node> <value>`` lines."""
    if isinstance(pi, dict):
        items = sorted(pi.items())
    else:
        items = list(enumerate(pi, start=1))
    return "".join(f"v {node} {value}\n" for node, value in items)


def parse_potentials(text, instance: Instance) -> dict[int, int]:
    pi: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if tok[0] != "v" or len(tok) != 3:
            raise FormatError("expected 'v <node> <value>'", lineno)
        node = _int(tok[1], lineno, "node")
        if not 1 <= node <= instance.num_nodes:
            raise FormatError(f"node {node} out of range", lineno)
        if node in pi:
            raise FormatError(f"duplicate node {node}", lineno)
        pi[node] = _int(tok[2], lineno, "potential", nonneg=False)
    missing = [v for v in instance.nodes if v not in pi]
    if missing:
        raise FormatError(f"missing potentials for nodes {missing}")
    return pi

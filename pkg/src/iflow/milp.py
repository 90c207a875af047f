"""Big-M mixed-integer model of the worst-case problem, as LP-format text.

The model maximizes the flow cost over capacities u and flows x while
forcing x to be optimal for u through dual feasibility and linearized
complementary slackness:

    cpi_e > 0  =>  x_e = 0        (y_e = 1)
    cpi_e < 0  =>  x_e = u_e      (z_e = 1)

The potential of the source is grounded at zero and not emitted as a
variable; potentials are only defined up to a shift anyway.

Emission and :func:`check_milp_assignment` share one row list, so the
checker evaluates exactly what is written to the file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import Instance


def big_m(instance: Instance) -> int:
    costs = [a.cost for a in instance.arcs]
    return max(max(a.upper for a in instance.arcs), 2 * sum(costs) + max(costs))


def _cost_bound(instance: Instance) -> int:
    costs = [a.cost for a in instance.arcs]
    return 2 * sum(costs) + max(costs)


@dataclass(frozen=True)
class Row:
    name: str
    terms: tuple  # ((coef, var), ...)
    sense: str  # "<=", ">=", "="
    rhs: int


@dataclass(frozen=True)
class MilpAssignment:
    x: tuple
    u: tuple
    pi: Mapping[int, int]
    alpha: tuple
    cpi: tuple
    y: tuple
    z: tuple

    def values(self, instance: Instance) -> dict[str, int]:
        """Variable name -> value, with potentials shifted so pi[source] = 0."""
        shift = self.pi[instance.source]
        out = {}
        for e in range(instance.num_arcs):
            out[f"x_{e}"] = self.x[e]
            out[f"u_{e}"] = self.u[e]
            out[f"alpha_{e}"] = self.alpha[e]
            out[f"cpi_{e}"] = self.cpi[e]
            out[f"y_{e}"] = self.y[e]
            out[f"z_{e}"] = self.z[e]
        for v in instance.nodes:
            if v != instance.source:
                out[f"pi_{v}"] = self.pi[v] - shift
        return out


@dataclass
class MilpCheck:
    objective: int | None
    violated: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violated

    def __bool__(self) -> bool:
        return self.ok


def _pi_terms(instance: Instance, i: int, j: int):
    # pi_i - pi_j, with the grounded source potential dropped
    terms = []
    if i != instance.source:
        terms.append((1, f"pi_{i}"))
    if j != instance.source:
        terms.append((-1, f"pi_{j}"))
    return terms


def build_rows(instance: Instance, tighten: bool = False) -> list[Row]:
    m_all = big_m(instance)
    k_cost = _cost_bound(instance)
    s, t, f = instance.source, instance.sink, instance.flow_amount
    rows: list[Row] = []

    def add(terms, sense, rhs):
        rows.append(Row(f"r{len(rows) + 1}", tuple(terms), sense, rhs))

    out_arcs = {v: [] for v in instance.nodes}
    in_arcs = {v: [] for v in instance.nodes}
    for a in instance.arcs:
        out_arcs[a.tail].append(a.id)
        in_arcs[a.head].append(a.id)
    for v in instance.nodes:
        terms = [(1, f"x_{e}") for e in out_arcs[v]] + [(-1, f"x_{e}") for e in in_arcs[v]]
        rhs = f if v == s else -f if v == t else 0
        if not terms and rhs == 0:
            continue
        add(terms, "=", rhs)

    for a in instance.arcs:
        e = a.id
        add([(1, f"x_{e}"), (-1, f"u_{e}")], "<=", 0)
        add(_pi_terms(instance, a.tail, a.head) + [(-1, f"alpha_{e}")], "<=", a.cost)
        add([(1, f"cpi_{e}")] + _pi_terms(instance, a.tail, a.head), "=", a.cost)

    for a in instance.arcs:
        e = a.id
        m_x = a.upper if tighten else m_all
        m_c = k_cost if tighten else m_all
        add([(1, f"cpi_{e}"), (-m_c, f"y_{e}")], "<=", 0)
        add([(1, f"x_{e}"), (m_x, f"y_{e}")], "<=", m_x)
        add([(1, f"cpi_{e}"), (m_c, f"z_{e}")], ">=", 0)
        add([(1, f"u_{e}"), (-1, f"x_{e}"), (m_x, f"z_{e}")], "<=", m_x)
    return rows


def _format_terms(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if k == 0:
            parts.append(f"-{body}" if coef < 0 else body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def emit_milp(instance: Instance, tighten: bool = False) -> str:
    """Complete maximization model in LP format (ASCII, byte-stable)."""
    lines = ["\\ worst optimal flow cost under interval capacities"]
    lines.append(f"\\ M = {big_m(instance)}" + (" (tightened rows)" if tighten else ""))
    lines.append("Maximize")
    lines.append(" obj: " + _format_terms(objective_terms(instance)))
    lines.append("Subject To")
    for row in build_rows(instance, tighten):
        lines.append(f" {row.name}: {_format_terms(row.terms)} {row.sense} {row.rhs}")
    lines.append("Bounds")
    for a in instance.arcs:
        lines.append(f" x_{a.id} >= 0")
    for a in instance.arcs:
        lines.append(f" {a.lower} <= u_{a.id} <= {a.upper}")
    for a in instance.arcs:
        lines.append(f" alpha_{a.id} >= 0")
    for v in instance.nodes:
        if v != instance.source:
            lines.append(f" pi_{v} free")
    for a in instance.arcs:
        lines.append(f" cpi_{a.id} free")
    lines.append("Binary")
    for a in instance.arcs:
        lines.append(f" y_{a.id} z_{a.id}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def assemble_assignment(instance: Instance, flow, scenario, potentials) -> MilpAssignment:
    """Certificate assignment from an optimal flow, its scenario and potentials."""
    pi = dict(potentials) if isinstance(potentials, Mapping) else dict(zip(instance.nodes, potentials))
    cpi = tuple(a.cost - pi[a.tail] + pi[a.head] for a in instance.arcs)
    alpha = tuple(max(0, pi[a.tail] - pi[a.head] - a.cost) for a in instance.arcs)
    return MilpAssignment(
        x=tuple(flow[e] for e in range(instance.num_arcs)),
        u=tuple(scenario[e] for e in range(instance.num_arcs)),
        pi=pi,
        alpha=alpha,
        cpi=cpi,
        y=tuple(int(c > 0) for c in cpi),
        z=tuple(int(c < 0) for c in cpi),
    )


def _check_dims(instance: Instance, asg: MilpAssignment):
    m = instance.num_arcs
    for name in ("x", "u", "alpha", "cpi", "y", "z"):
        if len(getattr(asg, name)) != m:
            raise ValueError(f"assignment field {name} has length {len(getattr(asg, name))}, expected {m}")
    missing = [v for v in instance.nodes if v not in asg.pi]
    if missing:
        raise ValueError(f"assignment lacks potentials for nodes {missing}")


def check_milp_assignment(
    instance: Instance, assignment: MilpAssignment, tighten: bool = False
) -> MilpCheck:
    """Evaluate every emitted row and bound; objective is reported only if all hold."""
    _check_dims(instance, assignment)
    val = assignment.values(instance)
    violated = []
    for row in build_rows(instance, tighten):
        lhs = sum(c * val[v] for c, v in row.terms)
        ok = lhs <= row.rhs if row.sense == "<=" else lhs >= row.rhs if row.sense == ">=" else lhs == row.rhs
        if not ok:
            violated.append(f"{row.name}: {_format_terms(row.terms)} {row.sense} {row.rhs} (lhs {lhs})")
    for a in instance.arcs:
        e = a.id
        if val[f"x_{e}"] < 0:
            violated.append(f"bound x_{e} >= 0")
        if not a.lower <= val[f"u_{e}"] <= a.upper:
            violated.append(f"bound {a.lower} <= u_{e} <= {a.upper}")
        if val[f"alpha_{e}"] < 0:
            violated.append(f"bound alpha_{e} >= 0")
        for b in ("y", "z"):
            if val[f"{b}_{e}"] not in (0, 1):
                violated.append(f"binary {b}_{e}")
    if violated:
        return MilpCheck(None, violated)
    return MilpCheck(sum(a.cost * val[f"x_{a.id}"] for a in instance.arcs))


def variable_names(instance: Instance) -> list[str]:
    names = []
    for prefix in ("x", "u", "alpha", "cpi", "y", "z"):
        names += [f"{prefix}_{e}" for e in range(instance.num_arcs)]
    names += [f"pi_{v}" for v in instance.nodes if v != instance.source]
    return names


def count_variables(instance: Instance) -> int:
    return len(variable_names(instance))


def objective_terms(instance: Instance) -> Sequence[tuple[int, str]]:
    return [(a.cost, f"x_{a.id}") for a in instance.arcs]

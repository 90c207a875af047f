import itertools
import os
import re
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from iflow.generators import gen_paradox_complex, gen_paradox_simple
from iflow.model import Instance

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def simple():
    return gen_paradox_simple()


@pytest.fixture
def cplx():
    return gen_paradox_complex()


@st.composite
def instances(draw, max_nodes=5, max_arcs=6, max_cap=3, max_cost=9, max_f=4):
    """Small valid instances; every node gets an incident arc via a planted path."""
    n = draw(st.integers(2, max_nodes))
    m = draw(st.integers(n - 1, max(n - 1, max_arcs)))
    rows = []
    for k in range(m):
        if k < n - 1:
            a, b = k + 1, k + 2
        else:
            a = draw(st.integers(1, n))
            b = draw(st.integers(1, n).filter(lambda v, a=a: v != a))
        hi = draw(st.integers(0, max_cap))
        lo = draw(st.integers(0, hi))
        rows.append((a, b, lo, hi, draw(st.integers(0, max_cost))))
    f = draw(st.integers(1, max_f))
    return Instance.build(n, rows, 1, n, f)


def scenario_for(draw_or_rng, instance):
    return tuple(draw_or_rng.randint(a.lower, a.upper) for a in instance.arcs)


def brute_min_cost(instance, caps):
    """Cheapest integral flow of size f by enumerating every flow vector."""
    best = None
    s, t, f = instance.source, instance.sink, instance.flow_amount
    for x in itertools.product(*[range(c + 1) for c in caps]):
        bal = [0] * (instance.num_nodes + 1)
        for a, v in zip(instance.arcs, x):
            bal[a.tail] += v
            bal[a.head] -= v
        if all(bal[v] == (f if v == s else -f if v == t else 0) for v in instance.nodes):
            cost = sum(a.cost * v for a, v in zip(instance.arcs, x))
            best = cost if best is None else min(best, cost)
    return best


# ---------------------------------------------------------------- LP text reader

_TERM = re.compile(r"([+-]?)\s*(\d+)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def _terms(expr):
    out = {}
    expr = expr.strip()
    pos = 0
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        assert m, f"cannot read term at {expr[pos:]!r}"
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            coef = -coef
        out[m.group(3)] = out.get(m.group(3), 0) + coef
        pos = m.end()
        while pos < len(expr) and expr[pos] == " ":
            pos += 1
    return out


def read_lp(text):
    """Minimal reader for the emitted LP dialect; returns a dict of model parts."""
    section = None
    obj, rows, bounds, free, binary = {}, [], {}, set(), set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Subject To", "Bounds", "Binary", "End"):
            section = line
            continue
        if section == "Maximize":
            obj = _terms(line.split(":", 1)[1])
        elif section == "Subject To":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)\s*(<=|>=|=)\s*(-?\d+)$", body.strip())
            rows.append((name, _terms(m.group(1)), m.group(2), int(m.group(3))))
        elif section == "Bounds":
            if line.endswith("free"):
                free.add(line.split()[0])
            elif "<=" in line:
                lo, var, hi = re.match(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)", line).groups()
                bounds[var] = (int(lo), int(hi))
            else:
                var, lo = re.match(r"(\S+)\s*>=\s*(-?\d+)", line).groups()
                bounds[var] = (int(lo), None)
        elif section == "Binary":
            binary.update(line.split())
    return {"obj": obj, "rows": rows, "bounds": bounds, "free": free, "binary": binary}


def solve_lp_text(text, fix=None):
    """Optimum of the emitted maximization model via scipy's MILP solver.

    ``fix`` pins variables to values. Returns None when infeasible.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    model = read_lp(text)
    names = sorted(
        set(model["obj"]) | {v for _, t, _, _ in model["rows"] for v in t}
        | set(model["bounds"]) | model["free"] | model["binary"]
    )
    idx = {v: k for k, v in enumerate(names)}
    c = np.zeros(len(names))
    for v, a in model["obj"].items():
        c[idx[v]] = -a
    A = np.zeros((len(model["rows"]), len(names)))
    lo = np.full(len(model["rows"]), -np.inf)
    hi = np.full(len(model["rows"]), np.inf)
    for r, (_, terms, sense, rhs) in enumerate(model["rows"]):
        for v, a in terms.items():
            A[r, idx[v]] = a
        if sense in ("<=", "="):
            hi[r] = rhs
        if sense in (">=", "="):
            lo[r] = rhs
    vlo = np.zeros(len(names))
    vhi = np.full(len(names), np.inf)
    for v in model["free"]:
        vlo[idx[v]] = -np.inf
    for v, (a, b) in model["bounds"].items():
        vlo[idx[v]] = a
        if b is not None:
            vhi[idx[v]] = b
    integrality = np.zeros(len(names))
    for v in model["binary"]:
        integrality[idx[v]] = 1
        vlo[idx[v]], vhi[idx[v]] = max(vlo[idx[v]], 0), min(vhi[idx[v]], 1)
    for v, val in (fix or {}).items():
        vlo[idx[v]] = vhi[idx[v]] = val
    res = milp(c, constraints=LinearConstraint(A, lo, hi), bounds=Bounds(vlo, vhi), integrality=integrality)
    if res.status != 0:
        return None
    return round(-res.fun)

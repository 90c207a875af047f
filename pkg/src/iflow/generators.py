"""Instance constructors: named families and seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Instance

CUT_COMPLETE_LIMIT = 12


@dataclass(frozen=True)
class KnapsackData:
    b: int
    a: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.a) != len(self.values) or not self.a:
            raise ValueError("weights and values must be nonempty and of equal length")
        if any(v < 1 for v in self.a + self.values):
            raise ValueError("weights and values must be positive")
        if self.b < 0:
            raise ValueError("capacity must be nonnegative")


def knapsack_optimum(k: KnapsackData) -> int:
    """Exhaustive 0/1 knapsack optimum (independent of any flow code)."""
    best = 0
    n = len(k.a)
    for mask in range(1 << n):
        w = sum(k.a[i] for i in range(n) if mask >> i & 1)
        if w <= k.b:
            best = max(best, sum(k.values[i] for i in range(n) if mask >> i & 1))
    return best


def gen_knapsack_reduction(k: KnapsackData) -> Instance:
    """Series-parallel instance whose worst value equals the knapsack optimum.

    Per item i: ``s -> i`` with [0, a_i] at cost 0, ``i -> t`` crisp 1 at cost
    value_i, and a crisp a_i - 1 zero-cost route ``i -> aux_i -> t``. The
    auxiliary node replaces the parallel arc; its second leg is crisp a_i.
    """
    n_items = len(k.a)
    s, t = 1, 2 * n_items + 2
    arcs = []
    for i, (a_i, c_i) in enumerate(zip(k.a, k.values)):
        item, aux = 2 + i, 2 + n_items + i
        arcs.append((s, item, 0, a_i, 0))
        arcs.append((item, t, 1, 1, c_i))
        arcs.append((item, aux, a_i - 1, a_i - 1, 0))
        arcs.append((aux, t, a_i, a_i, 0))
    return Instance.build(t, arcs, s, t, min(k.b, sum(k.a)))


def gen_interior_chain(n: int) -> Instance:
    """Chain family on n >= 6 nodes where every worst scenario has n-1 interior arcs."""
    if n < 6:
        raise ValueError("interior chain needs n >= 6")
    arcs = []
    for i in range(1, n - 3):
        arcs.append((i, i + 1, n - i, n - i, 2))
    for i in (n - 3, n - 2):
        arcs.append((i, i + 1, n - i - 1, n - i - 1, 2))
    arcs.append((n - 1, n, 2, 2, 2))
    for i in range(1, n - 1):
        arcs.append((i, n, 0, 2, 1))
    arcs.append((n - 3, n - 1, 0, 2, 1))
    return Instance.build(n, arcs, 1, n, n)


def gen_paradox_simple() -> Instance:
    # s=1, first inner node=2, second inner node=3, t=4
    return Instance.build(
        4,
        [
            (1, 2, 1, 1, 1),
            (2, 3, 1, 1, 10),
            (3, 4, 1, 1, 1),
            (2, 4, 0, 1, 1),
            (1, 3, 0, 1, 1),
        ],
        1,
        4,
        1,
    )


def gen_paradox_complex() -> Instance:
    # s=1, inner nodes 1..4 -> 2..5, t=6
    return Instance.build(
        6,
        [
            (1, 2, 1, 1, 5),
            (1, 3, 0, 1, 4),
            (2, 3, 1, 1, 7),
            (3, 4, 1, 1, 5),
            (4, 5, 1, 1, 7),
            (2, 5, 0, 1, 4),
            (4, 6, 0, 1, 4),
            (5, 6, 1, 1, 5),
        ],
        1,
        6,
        1,
    )


def gen_cut_complete(n: int, limit: int = CUT_COMPLETE_LIMIT) -> Instance:
    """Complete digraph, every arc [0, 2] at unit cost, f = 1."""
    if not 3 <= n <= limit:
        raise ValueError(f"n must lie in 3..{limit}")
    arcs = [(i, j, 0, 2, 1) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return Instance.build(n, arcs, 1, n, 1)


def _random_interval(rng: random.Random, cap_hi: int, min_upper: int = 0):
    hi = rng.randint(min_upper, cap_hi)
    lo = rng.randint(0, hi)
    return lo, hi


def gen_random(n: int, m: int, cap_hi: int, cost_hi: int, f: int, seed: int) -> Instance:
    """Seeded random instance on nodes 1..n with s = 1, t = n.

    A spanning s-t path with upper capacities >= 1 is planted first, so
    every node has an arc and t is reachable at the upper scenario.
    """
    if n < 2 or m < n - 1 or cap_hi < 1 or cost_hi < 0 or f < 0:
        raise ValueError("unsatisfiable parameters for gen_random")
    rng = random.Random(seed)
    inner = list(range(2, n))
    rng.shuffle(inner)
    order = [1, *inner, n]
    arcs = []
    for a, b in zip(order, order[1:]):
        lo, hi = _random_interval(rng, cap_hi, min_upper=1)
        arcs.append((a, b, lo, hi, rng.randint(0, cost_hi)))
    for _ in range(m - (n - 1)):
        a, b = rng.sample(range(1, n + 1), 2)
        lo, hi = _random_interval(rng, cap_hi)
        arcs.append((a, b, lo, hi, rng.randint(0, cost_hi)))
    rng.shuffle(arcs)
    return Instance.build(n, arcs, 1, n, f)


def gen_random_sp(m: int, cap_hi: int, cost_hi: int, f: int, seed: int) -> Instance:
    """Seeded random two-terminal series-parallel instance with m arcs."""
    if m < 1 or cap_hi < 0 or cost_hi < 0 or f < 0:
        raise ValueError("unsatisfiable parameters for gen_random_sp")
    rng = random.Random(seed)
    labels = iter(range(3, 10**9))
    arcs = []

    def build(k: int, src: int, dst: int):
        if k == 1:
            lo, hi = _random_interval(rng, cap_hi)
            arcs.append((src, dst, lo, hi, rng.randint(0, cost_hi)))
            return
        k1 = rng.randint(1, k - 1)
        if rng.random() < 0.5:
            mid = next(labels)
            build(k1, src, mid)
            build(k - k1, mid, dst)
        else:
            build(k1, src, dst)
            build(k - k1, src, dst)

    build(m, 1, 2)
    # relabel densely: source 1, inner nodes in creation order, sink last
    inner = sorted({v for a in arcs for v in a[:2]} - {1, 2})
    n = len(inner) + 2
    relabel = {1: 1, 2: n, **{v: i + 2 for i, v in enumerate(inner)}}
    rows = [(relabel[a], relabel[b], lo, hi, c) for a, b, lo, hi, c in arcs]
    rng.shuffle(rows)
    return Instance.build(n, rows, 1, n, f)

import itertools
import random

import pytest

from iflow.generators import KnapsackData, gen_knapsack_reduction, gen_random_sp, knapsack_optimum
from iflow.mcf import max_flow_value, min_cost
from iflow.model import Instance
from iflow.oracle import worst_value_bruteforce
from iflow.spdp import (
    NEG_INF,
    ComponentData,
    DisconnectedInstance,
    NotSeriesParallel,
    component_tables,
    format_sptree,
    leaf_table,
    parallel_table,
    parse_sptree,
    serial_table,
    sp_decompose,
    worst_value_sp,
)


def arc(lo, hi, cost):
    return Instance.build(2, [(1, 2, lo, hi, cost)], 1, 2, 1).arcs[0]


def test_two_parallel_arcs():
    inst = Instance.build(2, [(1, 2, 0, 1, 1), (1, 2, 0, 1, 1)], 1, 2, 1)
    tree = sp_decompose(inst)
    assert tree.kind == "parallel" and {tree.left.arc, tree.right.arc} == {0, 1}


def test_bridge_not_series_parallel(simple):
    assert sp_decompose(simple) is None
    with pytest.raises(NotSeriesParallel):
        worst_value_sp(simple)


def test_knapsack_graph_is_sp():
    inst = gen_knapsack_reduction(KnapsackData(4, (2, 3), (3, 4)))
    tree = sp_decompose(inst)
    assert sorted(tree.leaves()) == list(range(inst.num_arcs))
    assert parse_sptree(format_sptree(tree), inst) == tree


def test_disconnected_rejected():
    inst = Instance.build(4, [(1, 4, 0, 1, 1), (2, 3, 0, 1, 1)], 1, 4, 1)
    with pytest.raises(DisconnectedInstance):
        sp_decompose(inst)


def test_leaf_tables():
    assert leaf_table(arc(0, 5, 2), 3) == ComponentData((0, 2, 4, 6), 0, 3)
    assert leaf_table(arc(2, 2, 1), 4) == ComponentData((0, 1, 2, NEG_INF, NEG_INF), 2, 2)
    assert leaf_table(arc(0, 0, 9), 1) == ComponentData((0, NEG_INF), 0, 0)


def test_serial_table():
    out = serial_table(leaf_table(arc(0, 5, 2), 2), leaf_table(arc(2, 2, 1), 2), 2)
    assert out == ComponentData((0, 3, 6), 0, 2)
    dead = ComponentData((0, NEG_INF, NEG_INF), 0, 0)
    assert serial_table(leaf_table(arc(0, 5, 2), 2), dead, 2).d == (0, NEG_INF, NEG_INF)


def test_serial_commutative():
    rng = random.Random(0)
    for _ in range(50):
        f = rng.randint(1, 5)
        a = leaf_table(arc(*sorted(rng.sample(range(6), 2)), rng.randint(0, 9)), f)
        b = leaf_table(arc(*sorted(rng.sample(range(6), 2)), rng.randint(0, 9)), f)
        assert serial_table(a, b, f) == serial_table(b, a, f)


def test_parallel_cases():
    c = parallel_table(leaf_table(arc(0, 2, 1), 1), leaf_table(arc(0, 2, 5), 1), 1)
    assert c.d[1] == 5
    b = parallel_table(leaf_table(arc(2, 2, 1), 4), leaf_table(arc(3, 3, 5), 4), 4)
    assert b.d[4] == 12
    a = parallel_table(leaf_table(arc(0, 1, 1), 3), leaf_table(arc(0, 1, 1), 3), 3)
    assert a.d[3] == NEG_INF


def test_two_parallel_worst_value():
    inst = Instance.build(2, [(1, 2, 0, 2, 1), (1, 2, 0, 2, 5)], 1, 2, 1)
    assert worst_value_sp(inst) == 5 == worst_value_bruteforce(inst).c_w
    assert worst_value_sp(Instance.build(2, [(1, 2, 0, 5, 2)], 1, 2, 3)) == 6


def test_knapsack_example():
    inst = gen_knapsack_reduction(KnapsackData(4, (2, 3), (3, 4)))
    assert inst.flow_amount == 4 and worst_value_sp(inst) == 4


def test_knapsack_identity_exhaustive_small():
    rng = random.Random(8)
    for _ in range(60):
        k = rng.randint(1, 6)
        data = KnapsackData(
            rng.randint(0, 12),
            tuple(rng.randint(1, 5) for _ in range(k)),
            tuple(rng.randint(1, 9) for _ in range(k)),
        )
        assert worst_value_sp(gen_knapsack_reduction(data)) == knapsack_optimum(data)


def test_tables_sane_and_components_match_definitions():
    """r_lo / r_hi against their flow definitions on every subtree of small instances."""
    for seed in range(60):
        inst = gen_random_sp(5, 3, 5, 1 + seed % 5, seed)
        tree = sp_decompose(inst)
        tables = component_tables(inst, tree)
        for data in tables.values():
            assert data.check() == []
        root = tables[id(tree)]
        grid = list(itertools.product(*[range(a.lower, a.upper + 1) for a in inst.arcs]))
        flows = [max_flow_value(inst, u) for u in grid]
        f = inst.flow_amount
        assert root.r_lo == min(min(flows), f)
        assert root.r_hi == min(max(flows), f)
        for k in range(f + 1):
            costs = [min_cost(inst.with_flow(k), u) for u in grid]
            costs = [c for c in costs if c is not None]
            assert root.d[k] == (max(costs) if costs else NEG_INF)


def test_dp_matches_bruteforce():
    mismatches = 0
    for seed in range(120):
        inst = gen_random_sp(1 + seed % 8, 3, 9, 1 + seed % 6, seed)
        r = worst_value_bruteforce(inst)
        if worst_value_sp(inst) != (None if r is None else r.c_w):
            mismatches += 1
    assert mismatches == 0


def test_parallel_work_scales_quadratically():
    inst = gen_random_sp(8, 3, 9, 10, 4)
    tree = sp_decompose(inst)
    counts = []
    for f in (10, 20, 40):
        stats = {}
        worst_value_sp(inst.with_flow(f), tree, stats)
        counts.append(stats.get("parallel_ops", 0))
    assert counts[0] > 0
    assert counts[1] <= 4.5 * counts[0] and counts[2] <= 4.5 * counts[1]


@pytest.mark.parametrize(
    "expr, needle",
    [
        ("S(0,1", "expected"),
        ("P(0,0)", "exactly once"),
        ("S(0,S(1,1))", "overlap|sink"),
        ("9", "out of range"),
        ("S(0,1)x", "bad SP expression"),
    ],
)
def test_sptree_parse_errors(expr, needle):
    inst = Instance.build(3, [(1, 2, 0, 1, 1), (2, 3, 0, 1, 1)], 1, 3, 1)
    with pytest.raises(ValueError, match=needle):
        parse_sptree(expr, inst)


def test_sptree_given_tree_used():
    inst = Instance.build(3, [(1, 2, 0, 2, 1), (2, 3, 1, 2, 4), (1, 3, 0, 1, 2)], 1, 3, 2)
    tree = parse_sptree("P(S(0,1),2)", inst)
    assert worst_value_sp(inst, tree) == worst_value_bruteforce(inst).c_w

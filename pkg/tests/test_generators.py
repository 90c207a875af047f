import pytest

from iflow.generators import (
    KnapsackData,
    gen_cut_complete,
    gen_interior_chain,
    gen_knapsack_reduction,
    gen_paradox_complex,
    gen_paradox_simple,
    gen_random,
    gen_random_sp,
    knapsack_optimum,
)
from iflow.mcf import max_flow_value, min_cost
from iflow.model import validate_instance
from iflow.oracle import worst_value_bruteforce
from iflow.spdp import sp_decompose, worst_value_sp
from iflow.structure import interior_arcs


def test_knapsack_examples():
    inst = gen_knapsack_reduction(KnapsackData(4, (2, 3), (3, 4)))
    assert inst.flow_amount == 4 and worst_value_bruteforce(inst).c_w == 4
    zero = gen_knapsack_reduction(KnapsackData(0, (1,), (7,)))
    assert zero.flow_amount == 0 and worst_value_bruteforce(zero).c_w == 0
    full = gen_knapsack_reduction(KnapsackData(10, (2, 2), (1, 1)))
    assert full.flow_amount == 4 and worst_value_bruteforce(full).c_w == 2


def test_knapsack_data_guards():
    with pytest.raises(ValueError):
        KnapsackData(3, (1, 2), (1,))
    with pytest.raises(ValueError):
        KnapsackData(3, (0,), (1,))
    assert knapsack_optimum(KnapsackData(5, (2, 3, 4), (3, 4, 6))) == 7


def test_chain():
    inst = gen_interior_chain(6)
    assert (inst.num_nodes, inst.num_arcs, inst.flow_amount) == (6, 10, 6)
    r = worst_value_bruteforce(inst)
    assert r.c_w == 33 and len(interior_arcs(inst, r.scenario)) == 5
    r7 = worst_value_bruteforce(gen_interior_chain(7))
    inner = interior_arcs(gen_interior_chain(7), r7.scenario)
    assert len(inner) == 6 and all(r7.scenario[e] == 1 for e in inner)
    with pytest.raises(ValueError):
        gen_interior_chain(5)


def test_paradox_examples():
    assert worst_value_bruteforce(gen_paradox_simple()).c_w == 12
    assert worst_value_bruteforce(gen_paradox_complex()).c_w == 29
    assert validate_instance(gen_paradox_simple()).ok and validate_instance(gen_paradox_complex()).ok


def test_cut_complete():
    three = gen_cut_complete(3)
    assert three.num_arcs == 6 and max_flow_value(three, three.upper_scenario()) >= 1
    four = gen_cut_complete(4)
    assert min_cost(four, (0,) * 12) is None
    one = [0] * 12
    one[0] = 1  # arc 1 -> 2
    assert min_cost(four, one) is None
    one[2] = 1  # arc 1 -> 4
    assert min_cost(four, one) == 1
    with pytest.raises(ValueError):
        gen_cut_complete(13)


def test_random_deterministic_and_valid():
    assert gen_random(4, 6, 2, 5, 2, 1) == gen_random(4, 6, 2, 5, 2, 1)
    assert gen_random_sp(6, 2, 5, 2, 1) == gen_random_sp(6, 2, 5, 2, 1)
    mixed = 0
    for seed in range(100):
        inst = gen_random(5, 8, 3, 9, 2, seed)
        assert validate_instance(inst).ok
        if min_cost(inst, inst.lower_scenario()) is None and min_cost(inst, inst.upper_scenario()) is not None:
            mixed += 1
    assert mixed >= 1


def test_generated_families_valid_and_sp():
    for seed in range(100):
        sp = gen_random_sp(1 + seed % 10, 3, 9, 2, seed)
        assert validate_instance(sp).ok and sp_decompose(sp) is not None
        k = 1 + seed % 6
        data = KnapsackData(seed % 15, tuple(1 + (seed * i) % 5 for i in range(k)), tuple(1 + i for i in range(k)))
        ks = gen_knapsack_reduction(data)
        assert validate_instance(ks).ok and sp_decompose(ks) is not None
        assert worst_value_sp(ks) == knapsack_optimum(data)

import random

import pytest

from iflow.generators import gen_interior_chain, gen_random
from iflow.mcf import InconsistentInputError, certify_optimality, min_cost_flow, optimality_potentials
from iflow.model import Flow, Instance, Scenario
from iflow.oracle import worst_value_bruteforce
from iflow.structure import (
    cycle_cost,
    extremalize_to_forest,
    find_cycle,
    interior_arcs,
    is_forest,
    minimal_capacities,
)


def test_minimal_capacities_examples(simple):
    r = worst_value_bruteforce(simple)
    assert minimal_capacities(simple, r.scenario, r.flow) == r.scenario
    inst = Instance.build(2, [(1, 2, 0, 4, 1), (1, 2, 1, 4, 1)], 1, 2, 4)
    flow = Flow.from_values(inst, (2, 2))
    assert minimal_capacities(inst, Scenario((4, 4)), flow) == Scenario((2, 2))
    low = Flow.from_values(inst.with_flow(1), (0, 1))
    assert minimal_capacities(inst, Scenario((4, 4)), low) == inst.lower_scenario()


def test_interior_arcs():
    inst = gen_interior_chain(6)
    assert interior_arcs(inst, inst.upper_scenario()) == frozenset()
    r = worst_value_bruteforce(inst)
    assert interior_arcs(inst, r.scenario) == frozenset(range(5, 10))
    u = list(inst.lower_scenario())
    u[5] = 1
    assert interior_arcs(inst, Scenario(tuple(u))) == {5}


def test_find_cycle_parallel_pair():
    inst = Instance.build(2, [(1, 2, 0, 2, 1), (1, 2, 0, 2, 3)], 1, 2, 1)
    cyc = find_cycle(inst, [0, 1])
    assert sorted(e for e, _ in cyc) == [0, 1]
    assert abs(cycle_cost(inst, cyc)) == 2
    assert is_forest(inst, [0])


def test_find_cycle_triangle_orientation():
    inst = Instance.build(3, [(1, 2, 0, 1, 1), (2, 3, 0, 1, 1), (1, 3, 0, 1, 5)], 1, 3, 1)
    cyc = find_cycle(inst, [0, 1, 2])
    assert cycle_cost(inst, cyc) in (-3, 3)
    # consecutive steps share endpoints
    nodes = []
    for e, d in cyc:
        a = inst.arcs[e]
        nodes.append((a.tail, a.head) if d > 0 else (a.head, a.tail))
    for (_, b), (c, _) in zip(nodes, nodes[1:] + nodes[:1]):
        assert b == c


def test_no_interior_returned_unchanged(simple):
    r = worst_value_bruteforce(simple)
    u, x = extremalize_to_forest(simple, r.scenario, r.flow)
    assert u == r.scenario and x == r.flow


def test_chain_six_fixed_point():
    inst = gen_interior_chain(6)
    r = worst_value_bruteforce(inst)
    u, x = extremalize_to_forest(inst, r.scenario, r.flow)
    inner = interior_arcs(inst, u)
    assert len(inner) == 5 and all(u[e] == 1 for e in inner)
    assert x.total_cost == 33


@pytest.mark.parametrize("n", [6, 7])
def test_chain_forest_bound_tight(n):
    inst = gen_interior_chain(n)
    r = worst_value_bruteforce(inst)
    u, _ = extremalize_to_forest(inst, r.scenario, r.flow)
    assert len(interior_arcs(inst, u)) == n - 1


def test_cancels_a_cycle():
    # two parallel interior arcs of equal cost carrying flow 1 each out of [0,2]
    inst = Instance.build(2, [(1, 2, 0, 2, 3), (1, 2, 0, 2, 3)], 1, 2, 2)
    u, x = extremalize_to_forest(inst, Scenario((1, 1)), Flow.from_values(inst, (1, 1)))
    assert len(interior_arcs(inst, u)) <= 1 and x.total_cost == 6
    assert certify_optimality(inst, u, x, optimality_potentials(inst, u, x)).ok


def test_rejects_non_optimal(simple):
    with pytest.raises(InconsistentInputError):
        extremalize_to_forest(simple, simple.upper_scenario(), Flow.from_values(simple, (1, 1, 1, 0, 0)))


def test_random_worst_results():
    for seed in range(120):
        inst = gen_random(5, 7, 2, 9, 1 + seed % 3, seed)
        r = worst_value_bruteforce(inst)
        if r is None:
            continue
        u, x = extremalize_to_forest(inst, r.scenario, r.flow)
        inner = interior_arcs(inst, u)
        assert x.total_cost == r.c_w
        assert is_forest(inst, inner) and len(inner) <= inst.num_nodes - 1
        assert certify_optimality(inst, u, x, optimality_potentials(inst, u, x)).ok
        assert min_cost_flow(inst, u).cost == r.c_w


def test_non_worst_input_never_loses_cost():
    rng = random.Random(4)
    for seed in range(150):
        inst = gen_random(5, 8, 3, 9, 1 + seed % 3, seed)
        u0 = Scenario(tuple(rng.randint(a.lower, a.upper) for a in inst.arcs))
        sol = min_cost_flow(inst, u0)
        if sol is None:
            continue
        u, x = extremalize_to_forest(inst, u0, sol.flow)
        assert x.total_cost >= sol.cost
        assert is_forest(inst, interior_arcs(inst, u))
        assert optimality_potentials(inst, u, x) is not None


def _all_optimal_flows(inst, caps):
    import itertools

    best, out = None, []
    s, t, f = inst.source, inst.sink, inst.flow_amount
    for x in itertools.product(*[range(c + 1) for c in caps]):
        bal = {v: 0 for v in inst.nodes}
        for a, v in zip(inst.arcs, x):
            bal[a.tail] += v
            bal[a.head] -= v
        if any(bal[v] != (f if v == s else -f if v == t else 0) for v in inst.nodes):
            continue
        cost = sum(a.cost * v for a, v in zip(inst.arcs, x))
        if best is None or cost < best:
            best, out = cost, [x]
        elif cost == best:
            out.append(x)
    return out


def test_non_basic_optimal_flows_get_forest():
    """Optimal flows spread over tied paths, so interior cycles must be cancelled."""
    rng = random.Random(9)
    cancelled = 0
    for seed in range(80):
        base = gen_random(4, 6, 3, 1, 2, seed)
        inst = Instance.build(4, [(a.tail, a.head, 0, 3, a.cost) for a in base.arcs], 1, 4, 3)
        caps = Scenario(tuple(a.upper for a in inst.arcs))
        flows = _all_optimal_flows(inst, caps)
        if not flows:
            continue
        flow = Flow.from_values(inst, rng.choice(flows))
        if find_cycle(inst, interior_arcs(inst, minimal_capacities(inst, caps, flow))):
            cancelled += 1
        u, x = extremalize_to_forest(inst, caps, flow)
        assert x.total_cost == flow.total_cost
        assert is_forest(inst, interior_arcs(inst, u))
        assert certify_optimality(inst, u, x, optimality_potentials(inst, u, x)).ok
    assert cancelled >= 5

"""Ground-truth worst optimal value by enumerating integral scenarios.

With integral bounds and integral f some integral scenario attains the
worst value, so scanning the integer grid of the capacity box is exact.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .mcf import max_flow_value, min_cost, min_cost_flow
from .model import Flow, Instance, Scenario

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} scenarios, budget is {budget}")


@dataclass(frozen=True)
class WorstResult:
    c_w: int
    scenario: Scenario
    flow: Flow
    feasible_count: int


def default_budget() -> int:
    env = os.environ.get("IFLOW_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def is_feasible_scenario(instance: Instance, scenario: Scenario) -> bool:
    if instance.flow_amount == 0:
        return True
    return max_flow_value(instance, scenario) >= instance.flow_amount


def _scan(instance: Instance, first_values: list[int]):
    """Best (cost, scenario) among scenarios whose arc-0 value is in ``first_values``."""
    ranges = [range(a.lower, a.upper + 1) for a in instance.arcs[1:]]
    best_cost, best_u, feasible = -1, None, 0
    for u0 in first_values:
        for rest in itertools.product(*ranges):
            u = (u0, *rest)
            cost = min_cost(instance, u)
            if cost is None:
                continue
            feasible += 1
            # product() yields lexicographic order, so strict > keeps the smallest maximizer
            if cost > best_cost:
                best_cost, best_u = cost, u
    return best_cost, best_u, feasible


def worst_value_bruteforce(
    instance: Instance, budget: int | None = None, workers: int = 1
) -> WorstResult | None:
    """Maximize the optimal cost over all feasible integral scenarios.

    Returns None when no scenario admits a flow of size f. Ties go to the
    lexicographically smallest scenario, independent of ``workers``.
    """
    budget = default_budget() if budget is None else budget
    required = instance.box_size()
    if required > budget:
        raise BudgetExceeded(required, budget)
    if instance.flow_amount == 0:
        u = instance.lower_scenario()
        return WorstResult(0, u, Flow((0,) * instance.num_arcs, 0), required)
    if max_flow_value(instance, instance.upper_scenario()) < instance.flow_amount:
        return None

    first = instance.arcs[0]
    values = list(range(first.lower, first.upper + 1))
    if workers > 1 and len(values) > 1:
        chunks = [values[i::workers] for i in range(workers)]
        chunks = [sorted(c) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_scan, [instance] * len(chunks), chunks))
    else:
        parts = [_scan(instance, values)]

    feasible = sum(p[2] for p in parts)
    candidates = [(cost, u) for cost, u, _ in parts if u is not None]
    best_cost = max(cost for cost, _ in candidates)
    best_u = min(u for cost, u in candidates if cost == best_cost)
    solution = min_cost_flow(instance, best_u)
    return WorstResult(best_cost, Scenario(best_u), solution.flow, feasible)

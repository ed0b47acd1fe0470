import random

import pytest
from hypothesis import given

from msrs.core import Instance, MRJob, MultiResourceInstance, validate
from msrs.exact import (
    BUDGET, INFEASIBLE, OPTIMAL, SearchLimits, decide_makespan, lower_bound, serial_upper, solve_exact,
)

from conftest import instances, sgs_opt


@pytest.mark.parametrize("m,sizes,K,status", [
    (2, [[2], [2]], 2, OPTIMAL),
    (2, [[2, 2]], 2, INFEASIBLE),
    (2, [[3], [3], [2], [2]], 5, OPTIMAL),
    (2, [[3], [3], [2], [2]], 4, INFEASIBLE),
])
def test_decide_examples(m, sizes, K, status):
    res = decide_makespan(Instance.from_sizes(m, sizes), K)
    assert res.status == status
    if status == OPTIMAL:
        assert res.makespan <= K
    else:
        assert res.lower == K + 1


@pytest.mark.parametrize("m,sizes,opt", [
    (1, [[1, 2, 3]], 6),
    (3, [[2], [2], [2]], 2),
    (2, [[4], [3], [3], [2]], 6),
    (2, [[4], [4], [4], [1]], 8),
])
def test_solve_examples(m, sizes, opt):
    res = solve_exact(Instance.from_sizes(m, sizes))
    assert res.status == OPTIMAL and res.makespan == opt
    assert validate(Instance.from_sizes(m, sizes), res.schedule).makespan == opt


def test_negative_K_rejected():
    with pytest.raises(ValueError):
        decide_makespan(Instance.from_sizes(1, [[1]]), -1)


def test_empty_instance():
    assert solve_exact(Instance(3, ())).makespan == 0


def test_budget_status():
    rng = random.Random(1)
    inst = Instance.from_sizes(3, [[rng.randint(1, 9) for _ in range(3)] for _ in range(7)])
    res = solve_exact(inst, SearchLimits(max_nodes=5))
    assert res.status == BUDGET
    # a budget stop still hands back a valid list schedule
    rep = validate(inst, res.schedule)
    assert rep.valid and rep.makespan <= res.upper and res.lower <= res.upper
    assert decide_makespan(inst, lower_bound(inst), SearchLimits(max_nodes=1)).status in (BUDGET, OPTIMAL)


def test_horizon_below_optimum():
    res = solve_exact(Instance.from_sizes(1, [[3], [3]]), SearchLimits(horizon=5))
    assert res.status == INFEASIBLE and res.lower == 6


def test_against_sgs_oracle_random():
    rng = random.Random(2024)
    for _ in range(120):
        m = rng.randint(1, 4)
        rows = [[rng.randint(1, 6) for _ in range(rng.randint(1, 3))] for _ in range(rng.randint(1, 4))]
        inst = Instance.from_sizes(m, rows)
        if inst.n > 7:
            continue
        assert solve_exact(inst).makespan == sgs_opt(inst)


@given(instances(m_max=4, max_jobs=6, p_max=5))
def test_matches_sgs_oracle(inst):
    assert solve_exact(inst).makespan == sgs_opt(inst)


@given(instances(m_max=4, max_jobs=7, p_max=6))
def test_decide_is_monotone(inst):
    opt = solve_exact(inst).makespan
    assert lower_bound(inst) <= opt
    assert decide_makespan(inst, opt).status == OPTIMAL
    assert decide_makespan(inst, opt + 1).status == OPTIMAL
    if opt > 0:
        assert decide_makespan(inst, opt - 1).status == INFEASIBLE


def test_multi_resource():
    jobs = (MRJob(0, 2, frozenset("ab")), MRJob(1, 2, frozenset("b")), MRJob(2, 2, frozenset("a")),
            MRJob(3, 1, frozenset("c")))
    inst = MultiResourceInstance(3, jobs)
    res = solve_exact(inst)
    assert res.makespan == 4 == sgs_opt(inst)
    assert validate(inst, res.schedule).valid


def test_allowed_restricts_starts():
    inst = Instance.from_sizes(2, [[2], [2]])
    res = decide_makespan(inst, 4, allowed={0: {2}})
    assert res.status == OPTIMAL and res.schedule[0][1] == 2
    assert decide_makespan(inst, 3, allowed={0: {2}}).status == INFEASIBLE


@given(instances(m_max=4, max_jobs=8, p_max=6))
def test_serial_upper_is_an_upper_bound(inst):
    assert solve_exact(inst).makespan <= serial_upper(inst) <= sum(j.p for j in inst.jobs)

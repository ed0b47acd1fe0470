import random
from fractions import Fraction

import pytest
from hypothesis import given

from msrs.approx53 import split_large_class, schedule_53
from msrs.core import Instance, Job, select_T_53, validate
from msrs.exact import solve_exact

from conftest import instances


def _jobs(ps):
    return [Job(i, 0, p) for i, p in enumerate(ps)]


@pytest.mark.parametrize("T,sizes,c1,c2", [
    (10, [4, 3], [4], [3]),
    (12, [3, 3, 3], [3, 3], [3]),
    (6, [2, 2, 1], [2], [2, 1]),
])
def test_split_large_class_examples(T, sizes, c1, c2):
    r = split_large_class(_jobs(sizes), T)
    assert [j.p for j in r.c1] == c1
    assert [j.p for j in r.c2] == c2


def test_split_large_class_rejects_bad_input():
    with pytest.raises(ValueError):
        split_large_class(_jobs([2, 2]), 6)  # p(c) = 2T/3 exactly
    with pytest.raises(ValueError):
        split_large_class(_jobs([4, 3]), 7)  # job above T/2


def test_split_large_class_bounds_random():
    rng = random.Random(3)
    done = 0
    while done < 400:
        T = rng.randint(3, 30)
        sizes = [rng.randint(1, T // 2) for _ in range(rng.randint(1, 6))] if T >= 2 else []
        if not sizes or 3 * sum(sizes) <= 2 * T or sum(sizes) > T:
            continue
        r = split_large_class(_jobs(sizes), T)
        p1, p2 = sum(j.p for j in r.c1), sum(j.p for j in r.c2)
        assert p1 + p2 == sum(sizes)
        assert 3 * p1 >= T and 3 * p1 <= 2 * T
        assert 3 * p2 <= 2 * T
        done += 1


@pytest.mark.parametrize("m,sizes,bound", [
    (3, [[9], [9], [9]], 9),
    (2, [[6], [3, 3], [2, 2, 2]], 15),
    (1, [[1, 2], [3]], 6),
])
def test_schedule_53_examples(m, sizes, bound):
    inst = Instance.from_sizes(m, sizes)
    rep = validate(inst, schedule_53(inst))
    assert rep.valid and rep.makespan <= bound


def test_schedule_53_empty():
    assert schedule_53(Instance(2, ())) == {}


@given(instances(m_max=8, max_jobs=16))
def test_schedule_53_ratio(inst):
    rep = validate(inst, schedule_53(inst))
    assert rep.valid
    assert rep.makespan <= Fraction(5, 3) * select_T_53(inst)


@given(instances(m_max=4, max_jobs=7, p_max=6))
def test_schedule_53_against_optimum(inst):
    rep = validate(inst, schedule_53(inst))
    assert rep.makespan <= Fraction(5, 3) * solve_exact(inst).makespan

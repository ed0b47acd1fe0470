from fractions import Fraction

import pytest
from hypothesis import given

from msrs.approx32 import ClaimError, TraceEvent, classify, schedule_32, split_class_geq34, split_class_mid
from msrs.core import Instance, Job, select_T_32, validate
from msrs.exact import solve_exact
from msrs.generate import GeneratorSpec, generate_batch

from conftest import instances


def _jobs(ps):
    return [Job(i, 0, p) for i, p in enumerate(ps)]


def _ps(part):
    return [j.p for j in part]


@pytest.mark.parametrize("T,sizes,check,hat", [
    (4, [3, 1], [1], [3]),
    (4, [2, 2], [2], [2]),
    (8, [2, 2, 2, 1], [2, 1], [2, 2]),
])
def test_split_geq34_examples(T, sizes, check, hat):
    c, h = split_class_geq34(_jobs(sizes), T)
    assert (_ps(c), _ps(h)) == (check, hat)


@pytest.mark.parametrize("T,sizes,check,hat", [
    (4, [2, 1], [1], [2]),
    (8, [2, 2, 1], [1], [2, 2]),
    (12, [3, 3, 1], [1], [3, 3]),
])
def test_split_mid_examples(T, sizes, check, hat):
    c, h = split_class_mid(_jobs(sizes), T)
    assert (_ps(c), _ps(h)) == (check, hat)


def test_split_contracts():
    with pytest.raises(ValueError):
        split_class_geq34(_jobs([1, 1]), 4)
    with pytest.raises(ValueError):
        split_class_geq34(_jobs([4]), 4)
    with pytest.raises(ValueError):
        split_class_mid(_jobs([1, 1]), 4)
    with pytest.raises(ValueError):
        split_class_mid(_jobs([3]), 4)


def _random_class(rng, T, lo_load, hi_load, cap):
    for _ in range(100):
        sizes = [rng.randint(1, cap) for _ in range(rng.randint(1, 6))]
        if lo_load(sum(sizes)) and hi_load(sum(sizes)):
            return sizes
    return None


def test_split_lemma_bounds_random():
    import random
    rng = random.Random(5)
    for _ in range(500):
        T = rng.randint(4, 40)
        sizes = _random_class(rng, T, lambda s: 4 * s >= 3 * T, lambda s: s <= T, 3 * T // 4)
        if sizes:
            c, h = split_class_geq34(_jobs(sizes), T)
            pc, ph = sum(_ps(c)), sum(_ps(h))
            assert pc + ph == sum(sizes)
            assert 2 * pc <= T and 4 * ph <= 3 * T and pc <= ph
            if 2 * max(sizes) <= T:
                assert any(T < 4 * x <= 2 * T for x in (pc, ph))
        sizes = _random_class(rng, T, lambda s: 2 * s > T, lambda s: 4 * s <= 3 * T, T // 2)
        if sizes:
            c, h = split_class_mid(_jobs(sizes), T)
            pc, ph = sum(_ps(c)), sum(_ps(h))
            assert pc + ph == sum(sizes)
            assert pc <= ph and 2 * ph <= T and 4 * ph > T


def test_classify_examples():
    p = classify(Instance.from_sizes(1, [[4], [3], [2]]), 4)
    assert (p.huge, p.big, p.light) == ({0}, {1}, {2})
    assert classify(Instance.from_sizes(1, [[1, 1, 1]]), 4).heavy == {0}
    assert classify(Instance.from_sizes(1, [[5, 2]]), 8).big == {0}
    p = classify(Instance.from_sizes(1, [[1, 1], [5], [3, 2], [3, 1]]), 8)
    assert (p.light, p.mid_big, p.mid) == ({0, 3}, {1}, {2})
    with pytest.raises(ValueError):
        classify(Instance.from_sizes(1, [[1]]), 0)


@given(instances(m_max=5, max_jobs=12, p_max=10))
def test_classify_is_a_partition_of_bands(inst):
    T = select_T_32(inst)
    p = classify(inst, T)
    named = [p.huge, p.heavy, p.mid, p.mid_big, p.light, p.big - p.mid_big]
    seen = set()
    for s in named:
        assert not (seen & s)
        seen |= s
    assert seen == set(range(len(inst.classes)))


@pytest.mark.parametrize("m,sizes,T,makespan", [
    (2, [[6], [3, 3], [2, 2, 2]], 9, Fraction(27, 2)),
    (2, [[7], [4, 4], [1, 1]], Fraction(17, 2), 9),
    (2, [[3, 2], [3, 2], [1]], Fraction(11, 2), Fraction(33, 4)),
    (3, [[4, 4], [4, 4], [4, 4], [4, 4]], Fraction(32, 3), 16),
])
def test_schedule_32_frozen(m, sizes, T, makespan):
    inst = Instance.from_sizes(m, sizes)
    assert select_T_32(inst) == T
    rep = validate(inst, schedule_32(inst, check=True))
    assert rep.valid and rep.makespan == makespan <= Fraction(3, 2) * T


def test_trace_records_claims():
    inst = Instance.from_sizes(2, [[3, 3], [4, 1], [5], [2, 2, 2]])
    trace: list[TraceEvent] = []
    schedule_32(inst, trace=trace)
    assert len(trace) >= 10 and all(e.ok for e in trace)
    assert str(trace[0]).startswith("[ok] 1:")


def test_claim_error_is_assertion():
    assert issubclass(ClaimError, AssertionError)


@given(instances(m_max=8, max_jobs=16))
def test_schedule_32_ratio(inst):
    rep = validate(inst, schedule_32(inst, check=True))
    assert rep.valid
    assert rep.makespan <= Fraction(3, 2) * select_T_32(inst)


def test_schedule_32_boundary_profile():
    batch = generate_batch(GeneratorSpec(seed=4, profile="adversarial-3/4-boundary"), 60)
    for inst in batch:
        rep = validate(inst, schedule_32(inst, check=True))
        assert rep.valid and rep.makespan <= Fraction(3, 2) * select_T_32(inst)


@given(instances(m_max=4, max_jobs=7, p_max=6))
def test_schedule_32_against_optimum(inst):
    rep = validate(inst, schedule_32(inst))
    assert rep.makespan <= Fraction(3, 2) * solve_exact(inst).makespan

import itertools
import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from msrs.core import Instance

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def instances(draw, m_max=6, max_jobs=12, p_max=10, min_classes=1):
    m = draw(st.integers(1, m_max))
    n_classes = draw(st.integers(min_classes, max(min_classes, max_jobs)))
    rows = []
    left = max_jobs
    for _ in range(n_classes):
        if left == 0:
            break
        k = draw(st.integers(1, min(4, left)))
        rows.append(draw(st.lists(st.integers(1, p_max), min_size=k, max_size=k)))
        left -= k
    return Instance.from_sizes(m, rows)


def sgs_opt(instance) -> int:
    """Optimum by serial schedule generation over every job order.

    For a regular objective with renewable resources some order yields an
    optimal active schedule.  Unit-resolution integer time, plain loops.
    """
    jobs = [(j.id, j.p, frozenset(getattr(j, "resources", None) or {("c", j.class_id)})) for j in instance.jobs]
    if not jobs:
        return 0
    horizon = sum(p for _, p, _ in jobs)
    best = horizon
    for order in itertools.permutations(jobs):
        usage = [0] * (horizon + 1)
        res_busy: dict = {}
        end = 0
        for jid, p, rs in order:
            s = 0
            while True:
                if all(usage[t] < instance.m for t in range(s, s + p)) and all(
                        not (res_busy.get(r, set()) & set(range(s, s + p))) for r in rs):
                    break
                s += 1
            for t in range(s, s + p):
                usage[t] += 1
            for r in rs:
                res_busy.setdefault(r, set()).update(range(s, s + p))
            end = max(end, s + p)
            if end >= best:
                break
        best = min(best, end)
    return best


F = Fraction


ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

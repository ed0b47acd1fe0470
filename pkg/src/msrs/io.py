"""JSON formats for instances, schedules and formulas.

Instance:           {"machines": 2, "classes": [[4, 3], [2]]}
                    class entries may also be {"id": 7, "p": 4}; "m" is accepted for "machines"
Multi-resource:     {"machines": 2, "jobs": [{"id": 0, "p": 3, "resources": ["A_1"]}]}
Schedule:           {"schedule": [{"job_id": 0, "machine": 1, "start_numerator": 3,
                                   "start_denominator": 2, "start": 1.5}], ...}
Formula:            {"vars": 3, "clauses": [[1, 2, 3], [-1, -2, -3], ...]}

Start times are read from the exact numerator/denominator pair; the decimal
``start`` field is for humans only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import Instance, Job, MRJob, MultiResourceInstance, Schedule


class InputError(ValueError):
    """Malformed input; carries a location when one is known."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None, where: str | None = None):
        self.line, self.col, self.where = line, col, where
        loc = []
        if line is not None:
            loc.append(f"line {line}, column {col}")
        if where:
            loc.append(where)
        super().__init__(f"{msg} ({'; '.join(loc)})" if loc else msg)


def _locate(text: str, path: str) -> tuple[int | None, int | None]:
    """Rough line/column of the last key named in ``path`` (best effort)."""
    key = None
    for part in reversed(path.replace("]", "").split("[")):
        part = part.split(".")[-1]
        if part and not part.isdigit():
            key = part
            break
    if key is None:
        return None, None
    idx = text.find(f'"{key}"')
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def loads_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(e.msg, e.lineno, e.colno) from None


def _fail(text: str, msg: str, path: str):
    line, col = _locate(text, path)
    raise InputError(msg, line, col, path)


def _int(text, v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(text, f"expected an integer, got {v!r}", path)
    if lo is not None and v < lo:
        _fail(text, f"expected a value >= {lo}, got {v}", path)
    return v


@dataclass
class ParsedInstance:
    instance: Instance | MultiResourceInstance
    zero_ids: list[int]  # zero-length jobs dropped on input (only with allow_zero)


def parse_instance(text: str, allow_zero: bool = False) -> ParsedInstance:
    data = loads_json(text)
    if not isinstance(data, dict):
        raise InputError("top level must be an object")
    key = "machines" if "machines" in data else "m"
    if key not in data:
        raise InputError("missing field 'machines'")
    m = _int(text, data[key], key, 1)
    if "jobs" in data:
        jobs = []
        if not isinstance(data["jobs"], list):
            _fail(text, "'jobs' must be a list", "jobs")
        for i, j in enumerate(data["jobs"]):
            path = f"jobs[{i}]"
            if not isinstance(j, dict) or not {"id", "p", "resources"} <= set(j):
                _fail(text, "job needs 'id', 'p' and 'resources'", path)
            p = _int(text, j["p"], path + ".p", 1)
            if not isinstance(j["resources"], list) or not all(isinstance(r, str) for r in j["resources"]):
                _fail(text, "'resources' must be a list of strings", path + ".resources")
            jobs.append(MRJob(_int(text, j["id"], path + ".id", 0), p, frozenset(j["resources"])))
        try:
            return ParsedInstance(MultiResourceInstance(m, tuple(jobs)), [])
        except ValueError as e:
            raise InputError(str(e)) from None
    if "classes" not in data or not isinstance(data["classes"], list):
        _fail(text, "missing list field 'classes'", "classes")
    classes = []
    zero = []
    next_id = 0
    used = set()
    for k, row in enumerate(data["classes"]):
        if not isinstance(row, list) or not row:
            _fail(text, "each class must be a non-empty list", f"classes[{k}]")
        jobs = []
        for i, e in enumerate(row):
            path = f"classes[{k}][{i}]"
            if isinstance(e, dict):
                if not {"id", "p"} <= set(e):
                    _fail(text, "job object needs 'id' and 'p'", path)
                jid = _int(text, e["id"], path + ".id", 0)
                p = _int(text, e["p"], path + ".p", 0)
            else:
                jid, p = next_id, _int(text, e, path, 0)
            next_id = max(next_id, jid) + 1
            if jid in used:
                _fail(text, f"duplicate job id {jid}", path)
            used.add(jid)
            if p == 0:
                if not allow_zero:
                    _fail(text, "zero processing time (pass --allow-zero to drop such jobs)", path)
                zero.append(jid)
                continue
            jobs.append((jid, p))
        if jobs:
            classes.append(jobs)
    inst = Instance(m, tuple(tuple(Job(jid, cid, p) for jid, p in c) for cid, c in enumerate(classes)))
    return ParsedInstance(inst, zero)


def dump_instance(inst: Instance | MultiResourceInstance) -> str:
    if isinstance(inst, MultiResourceInstance):
        data = {"machines": inst.m, "jobs": [{"id": j.id, "p": j.p, "resources": sorted(j.resources)} for j in inst.jobs]}
        return json.dumps(data, indent=1) + "\n"
    ids_in_order = [j.id for j in inst.jobs] == list(range(inst.n))
    if ids_in_order:
        rows = [[j.p for j in c] for c in inst.classes]
    else:
        rows = [[{"id": j.id, "p": j.p} for j in c] for c in inst.classes]
    body = ",\n  ".join(json.dumps(r) for r in rows)
    return f'{{\n "machines": {inst.m},\n "classes": [\n  {body}\n ]\n}}\n'


def schedule_to_json(schedule: Schedule, **extra) -> dict:
    rows = []
    for jid in sorted(schedule):
        mach, s = schedule[jid]
        s = Fraction(s)
        rows.append({"job_id": jid, "machine": mach, "start_numerator": s.numerator,
                     "start_denominator": s.denominator, "start": float(s)})
    out = {"schedule": rows}
    out.update(extra)
    return out


def dump_schedule(schedule: Schedule, **extra) -> str:
    return json.dumps(schedule_to_json(schedule, **extra), indent=1, default=str) + "\n"


def parse_schedule(text: str) -> Schedule:
    data = loads_json(text)
    rows = data.get("schedule") if isinstance(data, dict) else None
    if not isinstance(rows, list):
        raise InputError("missing list field 'schedule'")
    out: Schedule = {}
    for i, r in enumerate(rows):
        path = f"schedule[{i}]"
        need = {"job_id", "machine", "start_numerator", "start_denominator"}
        if not isinstance(r, dict) or not need <= set(r):
            _fail(text, "entry needs job_id, machine, start_numerator, start_denominator", path)
        jid = _int(text, r["job_id"], path + ".job_id")
        den = _int(text, r["start_denominator"], path + ".start_denominator", 1)
        num = _int(text, r["start_numerator"], path + ".start_numerator")
        if jid in out:
            _fail(text, f"job {jid} appears twice", path)
        out[jid] = (_int(text, r["machine"], path + ".machine"), Fraction(num, den))
    return out


def parse_formula(text: str):
    from .hardness import Formula322, FormulaError

    data = loads_json(text)
    if not isinstance(data, dict) or "vars" not in data or "clauses" not in data:
        raise InputError("formula needs 'vars' and 'clauses'")
    n = _int(text, data["vars"], "vars", 1)
    if not isinstance(data["clauses"], list):
        _fail(text, "'clauses' must be a list", "clauses")
    clauses = []
    for i, c in enumerate(data["clauses"]):
        if not isinstance(c, list):
            _fail(text, "clause must be a list of signed variable indices", f"clauses[{i}]")
        clauses.append(tuple(_int(text, l, f"clauses[{i}][{k}]") for k, l in enumerate(c)))
    try:
        return Formula322(n, tuple(clauses))
    except FormulaError as e:
        raise InputError(str(e)) from None


def dump_formula(f) -> str:
    return json.dumps({"vars": f.n_vars, "clauses": [list(c) for c in f.clauses]}) + "\n"


def read_text(path: str | Path) -> str:
    return Path(path).read_text()

import json
import subprocess
import sys

import pytest

from msrs.cli import main
from msrs.hardness import sat_formulas_3
from msrs.io import dump_formula, parse_schedule

INST = '{"machines": 2, "classes": [[3, 3], [4, 1], [5], [2, 2, 2]]}'


@pytest.fixture
def inst_file(tmp_path):
    p = tmp_path / "inst.json"
    p.write_text(INST)
    return p


@pytest.mark.parametrize("alg", ["a53", "a32", "eptas", "exact"])
def test_solve_then_validate(alg, inst_file, tmp_path, capsys):
    out = tmp_path / f"{alg}.json"
    assert main(["solve", alg, str(inst_file), "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["valid"] is True and data["summary"]["algorithm"] == alg
    assert len(parse_schedule(out.read_text())) == 8
    capsys.readouterr()
    assert main(["validate", str(inst_file), str(out)]) == 0
    assert capsys.readouterr().out.startswith("valid makespan=")


def test_trace_prints_claims(inst_file, tmp_path, capsys):
    assert main(["solve", "a32", str(inst_file), "--trace", "-o", str(tmp_path / "s.json")]) == 0
    err = capsys.readouterr().err
    assert err.count("claim [ok]") >= 10 and "FAIL" not in err


def test_invalid_schedule_exit_1(inst_file, tmp_path, capsys):
    s = tmp_path / "bad.json"
    rows = [{"job_id": j, "machine": 0, "start_numerator": 0, "start_denominator": 1} for j in range(8)]
    s.write_text(json.dumps({"schedule": rows}))
    assert main(["validate", str(inst_file), str(s)]) == 1
    assert "violation machine-overlap" in capsys.readouterr().out


def test_missing_job_exit_2(inst_file, tmp_path):
    s = tmp_path / "short.json"
    s.write_text(json.dumps({"schedule": [{"job_id": 0, "machine": 0, "start_numerator": 0,
                                           "start_denominator": 1}]}))
    assert main(["validate", str(inst_file), str(s)]) == 2


def test_malformed_json_exit_2(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"machines": 2,\n "classes": [[1,]]}')
    assert main(["solve", "a53", str(p)]) == 2
    assert "line 2, column" in capsys.readouterr().err


def test_zero_jobs_flag(tmp_path):
    p = tmp_path / "zero.json"
    p.write_text('{"machines": 1, "classes": [[0, 2], [1]]}')
    assert main(["solve", "a53", str(p)]) == 2
    out = tmp_path / "s.json"
    assert main(["solve", "a53", str(p), "--allow-zero", "-o", str(out)]) == 0
    assert parse_schedule(out.read_text())[0] == (0, 0)


def test_budget_exit_3(inst_file, tmp_path):
    assert main(["solve", "eptas", str(inst_file), "--max-layers", "2"]) == 3
    assert main(["solve", "exact", str(inst_file), "--max-nodes", "1"]) == 3


def test_generate_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["generate", "--seed", "4", "--profile", "many-light", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gantt(inst_file, tmp_path):
    s, svg = tmp_path / "s.json", tmp_path / "g.svg"
    main(["solve", "a32", str(inst_file), "-o", str(s)])
    assert main(["gantt", str(inst_file), str(s), "--T", "17/2", "--ratio", "3/2", "-o", str(svg)]) == 0
    assert svg.read_text().count('class="marker"') == 2


def test_reduce_verify(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(dump_formula(sat_formulas_3()[0]))
    out, gad = tmp_path / "inst.json", tmp_path / "gadgets.json"
    assert main(["reduce", str(f), "-o", str(out), "--gadgets", str(gad), "--verify"]) == 0
    err = capsys.readouterr().err
    assert "m=14 jobs=39" in err and "verify_gap: sat-side-4" in err
    assert json.loads(out.read_text())["machines"] == 14
    assert len(json.loads(gad.read_text())) == 39
    s = tmp_path / "s.json"
    assert main(["solve", "exact", str(out), "-o", str(s)]) == 0
    assert json.loads(s.read_text())["summary"]["makespan"] == "4"


def test_reduce_rejects_bad_formula(tmp_path):
    f = tmp_path / "f.json"
    f.write_text('{"vars": 3, "clauses": [[1, 2, 3]]}')
    assert main(["reduce", str(f)]) == 2


def test_bench_inline(tmp_path):
    out = tmp_path / "bench.txt"
    assert main(["bench", "--count", "3", "--m-max", "3", "--max-jobs", "6", "--workers", "1", "-o", str(out)]) == 0
    assert "a32" in out.read_text()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "msrs.cli", "solve", "a53", "-"], input=INST,
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["summary"]["valid"]

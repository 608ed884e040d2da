import json
import subprocess
import sys
from pathlib import Path

import pytest

from hermlambda import cli
from hermlambda.cli import JobError, main, parse_job

GOLDEN = Path(__file__).parent / "golden"
JOBS = sorted((GOLDEN / "jobs").glob("*.json"))
QUAT = {"algebra": {"kind": "quaternion", "a": -1, "b": -1}, "forms": [[1, 1], ["1/2"]]}


def write(tmp_path, doc, name="job.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eight_golden_jobs_are_committed():
    assert len(JOBS) == 8
    assert all((GOLDEN / f"{j.stem}.txt").exists() for j in JOBS)


@pytest.mark.parametrize("job", JOBS, ids=lambda p: p.stem)
def test_golden_invariant_tables(job, capsys):
    code, out, _ = run(capsys, "invariants", "--input", str(job))
    assert code == 0
    assert out == (GOLDEN / f"{job.stem}.txt").read_text()


@pytest.mark.parametrize("command", ["lambda", "det", "trace-form", "invariants", "goldman"])
def test_commands_succeed(command, tmp_path, capsys):
    path = write(tmp_path, QUAT)
    code, out, err = run(capsys, command, "--input", path, "--emit-gram", "--out", str(tmp_path / "r.json"))
    assert code == 0, err
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["command"] == command and doc["ok"] is True
    assert out.startswith(f"# hermlambda {command} on (-1,-1)")


def test_lambda_truncation_lists_every_degree(tmp_path, capsys):
    code, out, _ = run(capsys, "lambda", "--input", write(tmp_path, QUAT), "--truncation", "4")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("lambda^")]
    assert [ln.split()[0] for ln in lines[:5]] == [f"lambda^{d}" for d in range(5)]
    assert "dim=0" in lines[4 + 5]  # lambda^4 of the rank-one form <1/2>


def test_check_axioms_is_byte_identical_at_fixed_seed(tmp_path):
    path = write(tmp_path, QUAT)
    outs = []
    for n in range(2):
        r = subprocess.run([sys.executable, "-m", "hermlambda.cli", "check-axioms", "--input", path,
                            "--samples", "3", "--seed", "11", "--truncation", "3",
                            "--out", str(tmp_path / f"o{n}.json")], capture_output=True)
        assert r.returncode == 0, r.stderr
        outs.append((r.stdout, (tmp_path / f"o{n}.json").read_bytes()))
    assert outs[0] == outs[1]
    assert b"FAIL" not in outs[0][0]


@pytest.mark.parametrize("doc,path", [
    ({"algebra": {"kind": "quaternion", "a": -1}}, "algebra.b"),
    ({"algebra": {"kind": "quaternion", "a": 0.5, "b": -1}}, "algebra.a"),
    ({"algebra": {"kind": "quaternion", "a": -1, "b": -1, "involution": "orthogonal", "u": [1, 0, 0, 0]}},
     "algebra.u"),
    ({"algebra": {"kind": "octonion"}}, "algebra.kind"),
    ({"algebra": {"kind": "matrix", "n": 2, "involution": {"adjoint": [1, 0]}}}, "algebra.involution.adjoint"),
    ({"algebra": {"kind": "matrix", "n": 9}}, "algebra.n"),
    ({"algebra": {"kind": "quaternion", "a": -1, "b": -1}, "forms": [[1, [0, 1, 0]]]}, "forms[0][1]"),
    ({"algebra": {"kind": "quaternion", "a": -1, "b": -1}, "forms": [[1, [0, 1, 0, 0]]]}, "forms[0]"),
    ({"algebra": {"kind": "quaternion", "a": -1, "b": -1}, "d": -1}, "d"),
    ({"algebra": {"kind": "quaternion", "a": -1, "b": -1}, "colour": 1}, "colour"),
])
def test_input_errors_name_the_field(doc, path, tmp_path, capsys):
    code, out, err = run(capsys, "lambda", "--input", write(tmp_path, doc))
    assert code == 2
    assert err.startswith(f"error: {path}:")
    assert out == ""
    with pytest.raises(JobError) as e:
        parse_job(json.dumps(doc))
    assert e.value.path == path


def test_malformed_json_and_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "det", "--input", write(tmp_path, "{\"algebra\": "))
    assert code == 2 and "invalid JSON" in err
    code, _, err = run(capsys, "det", "--input", str(tmp_path / "nope.json"))
    assert code == 2 and "--input" in err
    code, _, _ = run(capsys, "frobnicate", "--input", "x")
    assert code == 2
    code, _, err = run(capsys, "lambda", "--input", write(tmp_path, QUAT), "--samples", "0")
    assert code == 2


def test_command_mismatch(tmp_path, capsys):
    code, _, err = run(capsys, "det", "--input", write(tmp_path, {**QUAT, "command": "lambda"}))
    assert code == 2 and err.startswith("error: command:")


def test_resource_cap_exit_code(tmp_path, capsys):
    doc = {"algebra": {"kind": "matrix", "n": 4}, "forms": [[1, 1]]}
    code, _, err = run(capsys, "lambda", "--input", write(tmp_path, doc), "--d", "6")
    assert code == 3 and "resource cap" in err


def test_check_failure_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, "goldman_checks", lambda a: {"sandwich": False})
    code, out, _ = run(capsys, "goldman", "--input", write(tmp_path, QUAT))
    assert code == 1 and "FAIL" in out


def test_adjoint_matrix_algebra_name():
    job = parse_job(json.dumps({"algebra": {"kind": "matrix", "n": 2, "involution": {"adjoint": [1, 3]}}}))
    assert job.algebra.name == "M2[adj<1,3>]"
    job = parse_job(json.dumps({"algebra": {"kind": "quaternion", "a": -1, "b": -3, "involution": "orthogonal",
                                            "u": [0, 1, 0, 0]}}))
    assert job.algebra.name == "(-1,-3)[Int(0,1,0,0)]"

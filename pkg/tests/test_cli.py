import io
import json
import subprocess
import sys

import numpy as np
import pytest

from hardyconj.antilinear import PointConjugation
from hardyconj.circfield import CircleField, OperatorSymbol
from hardyconj.verify_cli import CaseResult, serialize
from hardyconj.verify_cli.cli import emit_report, exit_status, main


def diag_z(*powers):
    return OperatorSymbol.diagonal(*(OperatorSymbol.scalar({p: 1.0}) for p in powers))


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(serialize(obj))
        return str(p)

    return {
        "theta": write("theta.json", diag_z(1, 2)),
        "lam": write("lam.json", diag_z(1, 1)),
        "big": write("big.json", diag_z(2, 3)),
        "swap": write("swap.json", OperatorSymbol.constant([[0, 1], [1, 0]])),
        "rot": write("rot.json", OperatorSymbol.constant([[0, 1], [-1, 0]])),
        "field": write("f.json", CircleField.from_terms(2, {0: [1, 1], 1: [1, 1], 2: [3, 0]})),
        "K": write("k.json", PointConjugation.swap(2)),
        "dir": str(tmp_path),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_empty_report_prints_nothing():
    buf = io.StringIO()
    emit_report([], "text", buf)
    assert buf.getvalue() == ""
    assert exit_status([]) == 0


def test_text_and_structured_formats():
    res = [CaseResult("a", "pass", {"r": 1e-15}, {"r": 1e-10}), CaseResult("b", "fail", {"r": 1.0}, {"r": 1e-10}, message="boom")]
    buf = io.StringIO()
    emit_report(res, "text", buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("CASE a PASS residual=")
    assert "worst=r" in lines[1] and "boom" in lines[1]
    assert lines[-1] == "SUMMARY total=2 pass=1 fail=1 error=0"
    buf = io.StringIO()
    emit_report(res, "structured", buf)
    doc = json.loads(buf.getvalue())
    assert doc["summary"] == {"total": 2, "pass": 1, "fail": 1, "error": 0}
    assert exit_status(res) == 1


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.splitlines()[0].startswith("ex-2.3\t")


def test_case_and_global_flags_anywhere(capsys):
    code, out, _ = run(capsys, "case", "ex-2.4", "ex-6.9", "--trials", "10", "--format", "text")
    assert code == 0 and "SUMMARY total=2 pass=2" in out
    code2, out2, _ = run(capsys, "--trials", "10", "case", "ex-2.4", "ex-6.9")
    assert out == out2


def test_structured_output_is_deterministic(capsys, tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        code, _, _ = run(capsys, "case", "thm-4.3", "lem-6.6", "--format", "structured", "--trials", "10", "--output", str(target))
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["summary"]["pass"] == 2


def test_seed_changes_random_draws_not_verdicts(capsys):
    a = run(capsys, "case", "thm-4.3", "--trials", "10", "--seed", "1", "--format", "structured")[1]
    b = run(capsys, "case", "thm-4.3", "--trials", "10", "--seed", "2", "--format", "structured")[1]
    assert a != b
    assert json.loads(a)["summary"] == json.loads(b)["summary"]


def test_overrides_flip_verdict(capsys, tmp_path):
    p = tmp_path / "tamper.json"
    p.write_text(json.dumps({"ex-2.4": {"psi2": {"1": [0.0, 0.5]}}}))
    code, out, _ = run(capsys, "case", "ex-2.4", "--data", str(p))
    assert code == 1 and "CASE ex-2.4 FAIL" in out


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["case", "nope"], "unknown case id"),
        (["case", "ex-2.4", "--data", "/nonexistent/o.json"], "No such file"),
        (["check-inner", "/nonexistent/t.json"], "No such file"),
        (["kernel", "{theta}", "--lam", "0.3", "--x", "1"], "needs 2"),
        (["kernel", "{theta}", "--lam", "zz", "--x", "1,0"], "complex number"),
        (["kernel", "{theta}", "--lam", "0.99", "--x", "1,0"], "cap"),
        (["case", "ex-2.4", "--output", "{dir}/missing/r.txt"], "missing"),
    ],
)
def test_usage_errors_exit_2(capsys, files, argv, fragment):
    code, _, err = run(capsys, *[a.format(**files) for a in argv])
    assert code == 2
    assert err.startswith("hardyconj: error:") and fragment in err


def test_parse_errors_exit_2(capsys):
    for argv in (["case"], ["all", "--tol", "-1"], ["all", "--band", "3"], ["bogus"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_band_accepts_negative_with_equals(capsys):
    code, out, _ = run(capsys, "case", "ex-2.3", "--band=-8,8", "--trials", "5")
    assert code == 0


def test_check_conjugation(capsys, files):
    assert run(capsys, "check-conjugation", files["swap"], "--trials", "10")[0] == 0
    code, out, _ = run(capsys, "check-conjugation", files["rot"])
    assert code == 1 and "symmetry" in out
    # the swap matrix is also symmetric for J = swap
    assert run(capsys, "check-conjugation", files["swap"], "--J", files["K"], "--kind", "tilde", "--trials", "10")[0] == 0


def test_check_inner(capsys, files):
    assert run(capsys, "check-inner", files["theta"], "--require-pure", "--J", files["K"])[0] == 1
    assert run(capsys, "check-inner", files["theta"], "--require-pure")[0] == 0
    assert run(capsys, "check-inner", files["swap"], "--require-pure")[0] == 1


def test_divides(capsys, files):
    code, out, _ = run(capsys, "divides", files["lam"], files["big"], "--format", "structured")
    doc = json.loads(out)["results"][0]
    assert code == 0 and doc["checks"]["divides"]
    psi = doc["artifacts"]["Psi"]
    assert [t["n"] for t in psi["terms"]] == [1, 2]  # Psi = diag(z, z^2)
    assert run(capsys, "divides", files["big"], files["lam"])[0] == 1


def test_project(capsys, files):
    code, out, _ = run(capsys, "project", files["theta"], files["field"], "--format", "structured")
    doc = json.loads(out)["results"][0]
    assert code == 0
    proj = {t["n"]: np.array(t["re"]) for t in doc["artifacts"]["projection"]["terms"]}
    np.testing.assert_allclose(proj[0], [1, 1])
    np.testing.assert_allclose(proj[1], [0, 1])
    assert 2 not in proj


@pytest.mark.parametrize("which", ["k", "ktilde"])
def test_kernel(capsys, files, which):
    code, out, _ = run(capsys, "kernel", files["theta"], "--lam", "0.3+0.2j", "--x", "1,1j", "--which", which)
    assert code == 0 and "PASS" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hardyconj", "case", "ex-2.3", "--trials", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("CASE ex-2.3 PASS")

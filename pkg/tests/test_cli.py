from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from conelab.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gamma_pole(capsys):
    code, out, _ = call(capsys, "gamma", "--r", "2", "--a", "1", "--lambda", "2,1/2")
    assert code == 0
    assert json.loads(out)["value"] == "pole"


def test_gamma_value(capsys):
    code, out, _ = call(capsys, "gamma", "--r", "2", "--a", "1", "--lambda", "2,2")
    assert code == 0
    assert json.loads(out)["value"]["real"] == pytest.approx(2.2214, abs=1e-4)


def test_pochhammer_exact(capsys):
    code, out, _ = call(capsys, "pochhammer", "--r", "2", "--a", "1", "--nu", "2", "--m", "1,1")
    assert code == 0 and json.loads(out)["value"] == "3"


def test_verify_recurrence_rank1(capsys):
    code, out, _ = call(capsys, "verify", "recurrence", "--r", "1", "--a", "1", "--nu", "2", "--max-weight", "12")
    payload = json.loads(out)
    assert code == 0
    assert len(payload["reports"]) == 13
    assert all(r["status"] == "exact-zero" for r in payload["reports"])


def test_verify_recurrence_mutated_exits_1(capsys):
    code, out, _ = call(
        capsys, "verify", "recurrence", "--r", "2", "--a", "1", "--nu", "4", "--max-weight", "2", "--mutate-sign"
    )
    assert code == 1
    assert json.loads(out)["status"] == "failed"


def test_verify_euler_both(capsys):
    code, out, _ = call(
        capsys, "verify", "euler", "--r", "2", "--a", "1", "--nu", "4", "--max-weight", "3", "--variant", "both"
    )
    assert code == 0
    assert json.loads(out)["passing_variants"] == ["a-half"]


def test_verify_binom_without_nu(capsys):
    code, out, _ = call(capsys, "verify", "binom", "--r", "3", "--a", "2", "--max-weight", "5")
    payload = json.loads(out)
    assert code == 0 and payload["status"] == "passed"
    assert "nu" not in payload["reports"][0]["params"]


def test_verify_recurrence_needs_nu(capsys):
    code, _, err = call(capsys, "verify", "recurrence", "--r", "2", "--a", "1")
    assert code == 2 and "--nu" in err


def test_verify_difference_and_binom(capsys):
    for ident in ("difference", "binom"):
        code, out, _ = call(capsys, "verify", ident, "--r", "2", "--a", "1", "--nu", "4", "--max-weight", "3")
        assert code == 0, ident
        assert json.loads(out)["status"] == "passed"


@pytest.mark.parametrize(
    "argv",
    [
        ["gamma", "--r", "0", "--a", "1", "--lambda", "1"],
        ["gamma", "--r", "2", "--a", "x", "--lambda", "1,1"],
        ["jack", "--r", "2", "--a", "1", "--m", "1,2"],
        ["verify", "recurrence", "--r", "2", "--a", "1", "--nu", "1/4"],
        ["jack", "--r", "2", "--a", "1", "--m", "20"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert err


def test_jack_output(capsys):
    code, out, _ = call(capsys, "jack", "--r", "2", "--a", "1", "--m", "2")
    terms = {t["partition"]: t["coeff"] for t in json.loads(out)["psi"]["terms"]}
    assert code == 0 and terms == {"2": "3/8", "1,1": "1/4"}


def test_coeffs_csv(capsys):
    code, out, _ = call(capsys, "coeffs", "--r", "2", "--a", "1", "--max-weight", "2", "--table", "step")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] and len(rows) > 1


def test_branching(capsys):
    code, out, _ = call(capsys, "branching", "--r", "1", "--a", "1", "--nu", "2", "--n", "1")
    assert code == 0
    code, out, _ = call(capsys, "branching", "--r", "1", "--a", "1", "--nu", "2", "--source", "1", "--cap", "3")
    assert code == 0 and "16" in out


def test_laguerre_eval(capsys):
    code, out, _ = call(capsys, "laguerre", "--r", "1", "--a", "1", "--nu", "3", "--m", "1", "--eval", "0.5")
    obj = json.loads(out)
    assert code == 0 and obj["eval"]["L"] == pytest.approx(2.5)


def test_gram_csv_header(capsys):
    code, out, _ = call(capsys, "gram", "laguerre", "--r", "2", "--a", "1", "--nu", "4", "--max-weight", "2", "--nodes", "16")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["label", "", "1", "2", "1,1"]
    assert len(rows) == 5


def test_berezin_csv(capsys):
    code, out, _ = call(capsys, "berezin", "--nu", "4", "--lambda-grid", "0:2:1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert float(rows[1][1]) == pytest.approx(1.0)


def test_laplace_check(capsys):
    code, out, _ = call(capsys, "laplace-check", "--r", "2", "--a", "1", "--nu", "4", "--nodes", "24")
    assert code == 0


def test_mc_psi(capsys, monkeypatch):
    monkeypatch.setenv("CONELAB_SEED", "5")
    argv = ["mc-psi", "--r", "2", "--a", "1", "--m", "2", "--x", "2,0;0,1", "--samples", "20000"]
    code, out, _ = call(capsys, *argv)
    obj = json.loads(out)
    assert code == 0 and {"mean", "std_error", "jack_value", "sigmas"} <= set(obj)
    assert call(capsys, *argv)[1] == out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, out, _ = call(capsys, "gamma", "--r", "1", "--a", "1", "--lambda", "3", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())


def test_suite_quick_deterministic_and_mutation(capsys):
    first = call(capsys, "suite", "quick")
    second = call(capsys, "suite", "quick")
    assert first[0] == 0 and first[1] == second[1]
    code, out, _ = call(capsys, "suite", "quick", "--mutate-recurrence")
    assert code == 1
    payload = json.loads(out)
    assert payload["status"] == "failed" and payload["failed_reports"] > 0
    recurrence = next(sec for sec in payload["sections"] if sec["check"] == "recurrence")
    assert recurrence["status"] == "failed"
    assert any(r["status"] == "failed" and r["residual_terms"] for r in recurrence["reports"])


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "conelab", "gamma", "--r", "1", "--a", "1", "--lambda", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)

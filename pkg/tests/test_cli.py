import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from lane_emden_lab import core
from lane_emden_lab.cli import fmt, run
from lane_emden_lab.config import RunConfig, load_config, parse_config
from lane_emden_lab.errors import DomainError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_fmt():
    assert fmt(0.0) == "0" and fmt(-0.0) == "0"
    assert fmt(1.8540746773013719) == "1.8540746773013719"
    assert float(fmt(1 / 3)) == 1 / 3
    assert fmt(3) == "3"


def test_solve_csv():
    code, out, _ = call("solve", "--p", "3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "u", "du"]
    assert rows[1][0] == "0" and rows[1][2] == "0"
    assert float(rows[1][1]) == pytest.approx(1.854075, abs=1e-6)
    assert len(rows) == 1 + core.DEFAULT_N
    assert "\r" not in out


def test_solve_csv_round_trip():
    code, out, _ = call("solve", "--p", "5", "--n", "129")
    vals = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    sol = core.solve_unit(5, 129)
    assert np.array_equal(vals[:, 1], sol.u) and np.array_equal(vals[:, 2], sol.du)
    a = vals[0, 1]
    q = 6.0
    energy = 0.5 * vals[:, 2] ** 2 + vals[:, 1] ** q / q
    assert np.max(np.abs(energy - a**q / q)) < 1e-8 * a**q


def test_solve_rescaled():
    code, out, _ = call("solve", "--p", "3", "--L", "2", "--n", "33")
    rows = list(csv.reader(io.StringIO(out)))
    assert float(rows[1][1]) == pytest.approx(0.927037, abs=1e-6)
    assert float(rows[-1][0]) == 2.0


def test_solve_json():
    code, out, _ = call("solve", "--p", "3", "--n", "33", "--format", "json")
    data = json.loads(out)
    assert list(data[0]) == ["t", "u", "du"] and len(data) == 33


def test_spectrum():
    code, out, _ = call("spectrum", "--p", "2", "--k", "2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "alpha"] and rows[1][0] == "1"
    assert float(rows[1][1]) == pytest.approx(-2.4940575, abs=1e-6)


def test_stability_lambda():
    code, out, _ = call("stability", "--p", "1.01", "--lambda", "2.0")
    assert code == 0
    data = json.loads(out)
    assert list(data) == ["verdict", "end_slope", "margin"]
    assert data["verdict"] == "UNSTABLE"


def test_stability_cylinder():
    code, out, _ = call("stability", "--p", "1.01", "--L", "1", "--section", "interval", "--dims", "1")
    assert code == 0 and json.loads(out)["verdict"] == "STABLE"
    code, out, _ = call("stability", "--p", "1.01", "--L", "0.25", "--section", "interval")
    assert json.loads(out)["verdict"] == "UNSTABLE"


def test_stability_inapplicable_exits_3():
    code, out, _ = call("stability", "--p", "2", "--lambda", "1.0")
    assert code == 3
    data = json.loads(out)
    assert data["verdict"] == "INAPPLICABLE" and data["margin"] < 0 and "explanation" in data


def test_invalid_arguments_exit_2():
    assert call("solve", "--p", "3", "--bogus")[0] == 2
    assert call("solve", "--p", "0.5")[0] == 2
    assert call("stability", "--p", "2")[0] == 2
    assert call("stability", "--p", "2", "--lambda", "3", "--L", "1", "--section", "disk")[0] == 2
    assert call("stability", "--p", "2", "--L", "1", "--section", "rectangle", "--dims", "1")[0] == 2
    assert call("solve", "--p", "3", "--n", "5")[0] == 2


def test_unknown_flag_writes_usage_to_stderr():
    cp = subprocess.run(
        [sys.executable, "-m", "lane_emden_lab", "solve", "--p", "3", "--nope"],
        capture_output=True,
        text=True,
    )
    assert cp.returncode == 2
    assert "usage" in cp.stderr and cp.stdout == ""


def test_threshold():
    code, out, _ = call("threshold", "--p", "1.01")
    data = json.loads(out)
    assert code == 0 and list(data)[:2] == ["lambda_star", "bracket"]
    assert data["lambda_star"] == pytest.approx(2.467, abs=0.1)
    code, out, _ = call("threshold", "--p", "50")
    assert json.loads(out)["no_threshold"] is True


PHASE = ("phase", "--p-min", "1.01", "--p-max", "1.5", "--p-steps", "2",
         "--lambda-min", "2", "--lambda-max", "3", "--lambda-steps", "3")


def test_phase_deterministic(tmp_path):
    a = call(*PHASE)
    b = call(*PHASE)
    assert a[0] == 0 and a[1] == b[1]
    lines = a[1].splitlines()
    assert lines[0] == "p,lambda,verdict,end_slope" and len(lines) == 7
    assert lines[1].startswith("1.01,2,UNSTABLE,")
    out = tmp_path / "phase.csv"
    assert call(*PHASE, "--workers", "2", "-o", str(out))[0] == 0
    assert out.read_bytes() == a[1].encode()


def test_asymptotics_json():
    code, out, _ = call("asymptotics", "--regime", "near-one", "--p-list", "1.1", "1.05")
    data = json.loads(out)
    assert code == 0 and data["regime"] == "NearOne"
    assert list(data["metrics"]) == ["err_phi1", "err_q", "abs_alpha1", "slope_est"]
    code, _, err = call("asymptotics", "--regime", "large-p", "--p-list", "3")
    assert code == 2 and "p > 10" in err


def test_selfcheck_quick():
    code, out, _ = call("selfcheck", "--quick")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("checks passed")
    assert "FAIL" not in out


def test_selfcheck_failure_exit_code(monkeypatch):
    from lane_emden_lab import selfcheck

    monkeypatch.setattr(selfcheck, "CHECKS", [("always fails", lambda: (False, "x"), False)])
    code, out, _ = call("selfcheck")
    assert code == 5 and out.startswith("FAIL")


def test_config_file_and_flag_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "lel.conf"
    cfg.write_text("# test\nn_solve = 65\nformat = json\n")
    monkeypatch.setenv("LEL_CONFIG", str(cfg))
    code, out, _ = call("solve", "--p", "3")
    assert len(json.loads(out)) == 65
    code, out, _ = call("solve", "--p", "3", "--n", "33", "--format", "csv")
    assert len(out.splitlines()) == 34


def test_parse_config():
    assert parse_config("ivp-rel = 1e-9\n\n eig_tol=2e-6 # c\n") == {"ivp_rel": 1e-9, "eig_tol": 2e-6}
    with pytest.raises(DomainError):
        parse_config("nonsense = 1")
    with pytest.raises(DomainError):
        parse_config("n_solve = many")
    with pytest.raises(DomainError):
        parse_config("just a line")


def test_run_config_validation(tmp_path):
    with pytest.raises(DomainError):
        RunConfig(ivp_abs=0)
    with pytest.raises(DomainError):
        RunConfig(n_spectral=1024)
    with pytest.raises(DomainError):
        RunConfig(format="xml")
    with pytest.raises(DomainError):
        load_config(str(tmp_path / "missing.conf"))
    assert load_config(None) == RunConfig()


def test_bad_config_exits_2(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("marginal_band = -1\n")
    assert call("solve", "--p", "3", "--config", str(cfg))[0] == 2

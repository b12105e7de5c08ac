import json

import pytest

from click.testing import CliRunner

from qone.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_eval_angle_json():
    r = run("eval", "angle", "--x", "0.5")
    assert r.exit_code == 0
    rec = json.loads(r.output)
    assert rec["re"] == pytest.approx(0.687568511290114, rel=1e-10)
    assert rec["im"] == pytest.approx(1.235819380930040, rel=1e-10)


def test_eval_qbeta():
    r = run("eval", "qbeta", "--alpha", "0.4", "--beta", "0.9")
    assert r.exit_code == 0
    rec = json.loads(r.output)
    assert rec["abs_err"] < 1e-8


def test_eval_infeasible_exit_2():
    r = run("eval", "psi", "--alpha", "5.0", "--beta", "5.0",
            "--gamma", "0.1", "--x", "0.3")
    assert r.exit_code == 2


def test_usage_error_exit_2():
    r = run("eval", "angle", "--x", "0.5", "--no-such-flag")
    assert r.exit_code == 2
    r = run("verify", "nonsense-suite")
    assert r.exit_code == 2


def test_verify_qbeta_json_schema(tmp_path):
    out = tmp_path / "r.json"
    r = run("verify", "qbeta", "--seed", "7", "--trials", "3",
            "--format", "json", "--out", str(out))
    assert r.exit_code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1
    assert rep["suite"] == "qbeta"
    assert rep["seed"] == 7
    assert rep["pass"] is True
    assert rep["wall_time"] is None
    for c in rep["checks"]:
        assert c["status"] in ("pass", "fail", "skipped(infeasible)")


def test_verify_csv_columns(tmp_path):
    out = tmp_path / "r.csv"
    r = run("verify", "qbeta", "--seed", "7", "--trials", "2",
            "--format", "csv", "--out", str(out))
    assert r.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "suite,check_id,residual,scale,threshold,status,diagnostic"
    assert lines[-1].startswith("# pass=")
    assert "np.float64" not in out.read_text()


def test_verify_failing_suite_exit_1(tmp_path):
    out = tmp_path / "r.json"
    r = run("verify", "det", "--seed", "7", "--format", "json",
            "--out", str(out))
    assert r.exit_code == 1
    rep = json.loads(out.read_text())
    assert rep["pass"] is False
    statuses = {c["id"]: c["status"] for c in rep["checks"]}
    assert statuses["det-n1"] == "pass"
    assert statuses["det-n2"] == "skipped(infeasible)"


def test_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    r = run("sweep", "qbeta", "--alpha", "0.2:1.0:0.4", "--beta", "0.9",
            "--format", "csv", "--out", str(out))
    assert r.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,beta,re,im,abs_err,feasible"
    assert len(lines) == 4
    assert "np.float64" not in out.read_text()


def test_sweep_feasibility_flag():
    r = run("sweep", "qbeta", "--alpha", "-0.5:2.0:2.0", "--beta", "0.4",
            "--format", "csv")
    assert r.exit_code == 0
    lines = r.output.splitlines()
    assert lines[1].endswith("false")
    assert lines[2].endswith("true")


def test_sweep_point_cap_exit_2():
    r = run("sweep", "angle", "--x", "0:10:0.001", "--max-points", "100")
    assert r.exit_code == 2



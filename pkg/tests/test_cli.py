import csv
import json
from pathlib import Path

import pytest

from aitax import cli

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    # default output paths are cwd-relative; keep them out of the repo
    monkeypatch.chdir(tmp_path)
    return tmp_path


def cfg(name: str) -> str:
    return str(CONFIGS / name)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "0.1.0" in capsys.readouterr().out


def test_check_assumptions_pass(tmp_path, capsys):
    out = tmp_path / "checks.json"
    rc = cli.main(["check-assumptions", cfg("regime_a.cfg"), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["payload"]["all_pass"] is True
    assert doc["manifest"]["subcommand"] == "check-assumptions"
    assert "report written" in capsys.readouterr().out


def test_check_assumptions_failure_exit(tmp_path):
    out = tmp_path / "checks.json"
    rc = cli.main(["check-assumptions", cfg("cobb_douglas.cfg"), "--out", str(out)])
    assert rc == 1
    assert json.loads(out.read_text())["payload"]["all_pass"] is False


def test_missing_config_is_a_config_error(capsys):
    rc = cli.main(["check-assumptions", "no/such/file.cfg"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_solve_symmetric(tmp_path, capsys):
    out = tmp_path / "sol.json"
    rc = cli.main(["solve", cfg("symmetric.cfg"), "--out", str(out)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "regime: none_bind" in stdout
    doc = json.loads(out.read_text())
    assert doc["payload"]["regime"] == "none_bind"
    assert abs(doc["payload"]["wedges"]["tau_k_mult"]) <= 1e-6


def test_solve_regime_a_reports_verdicts(tmp_path, capsys):
    out = tmp_path / "sol.json"
    rc = cli.main(["solve", cfg("regime_a.cfg"), "--out", str(out)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "regime: cognitive_binds" in stdout
    assert "P1: pass" in stdout and "P3: pass" in stdout
    assert "P1p: not_applicable" in stdout
    verdicts = json.loads(out.read_text())["payload"]["wedges"]["verdicts"]
    assert {k: v["verdict"] for k, v in verdicts.items()} == {
        "P1": "pass", "P2": "pass", "P3": "pass",
        "P1p": "not_applicable", "P2p": "not_applicable", "P3p": "not_applicable",
    }


def test_solve_csv_writes_sidecar(tmp_path):
    out = tmp_path / "sol.csv"
    rc = cli.main(["solve", cfg("regime_a.cfg"), "--format", "csv", "--out", str(out)])
    assert rc == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:4] == ["t", "c_c", "c_m", "l_c"]
    assert len(rows) == 2  # header + the stationary period
    sidecar = json.loads((tmp_path / "sol.csv.manifest.json").read_text())
    assert sidecar["payload"]["regime"] == "cognitive_binds"
    assert "allocation" not in sidecar["payload"]


def test_solve_finite_horizon_override(tmp_path):
    out = tmp_path / "path.csv"
    rc = cli.main(["solve", cfg("regime_a_t20.cfg"), "--T", "6",
                   "--format", "csv", "--out", str(out)])
    assert rc == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 7  # header + flow periods t = 0..T
    assert [r[0] for r in rows[1:]] == [str(t) for t in range(7)]


def test_sweep_with_threshold(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = cli.main(["sweep", cfg("threshold.cfg"), "--param", "a_AI",
                   "--lo", "0.1", "--hi", "1.0", "--points", "5", "--log",
                   "--threshold", "--tol", "5e-3", "--out", str(out)])
    assert rc == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 5
    regimes = [r[1] for r in rows[1:]]
    assert regimes[0] == "cognitive_binds" and regimes[-1] == "manual_binds"
    bracket = json.loads((tmp_path / "sweep.csv.bracket.json").read_text())["payload"]
    assert 0.1 < bracket["lo"] < bracket["hi"] < 1.0
    assert bracket["width"] <= 5e-3
    assert "threshold bracket" in capsys.readouterr().out


def test_sweep_rejects_single_point(capsys):
    rc = cli.main(["sweep", cfg("threshold.cfg"), "--param", "a_AI",
                   "--lo", "0.1", "--hi", "1.0", "--points", "1"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_sweep_threshold_without_flip(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = cli.main(["sweep", cfg("threshold.cfg"), "--param", "a_AI",
                   "--lo", "1.0", "--hi", "10.0", "--points", "3", "--log",
                   "--threshold", "--out", str(out)])
    assert rc == 5
    assert "threshold error" in capsys.readouterr().err
    assert out.exists()  # the sweep table itself still gets written


def test_oracle_verify_fresh_solve(tmp_path):
    out = tmp_path / "oracle.json"
    rc = cli.main(["oracle-verify", cfg("regime_a.cfg"), "--grid-points", "6",
                   "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())["payload"]
    assert payload["source"] == "solve"
    assert payload["objective_ok"] is True
    assert payload["regime_ok"] is True


def test_oracle_verify_solution_file_round_trip(tmp_path):
    sol = tmp_path / "sol.json"
    assert cli.main(["solve", cfg("regime_a.cfg"), "--out", str(sol)]) == 0
    out = tmp_path / "oracle.json"
    rc = cli.main(["oracle-verify", cfg("regime_a.cfg"), "--solution", str(sol),
                   "--grid-points", "6", "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())["payload"]
    assert payload["source"] == "file"
    assert payload["kkt_ok"] is True


def test_oracle_verify_flags_corrupted_solution(tmp_path):
    sol = tmp_path / "sol.json"
    assert cli.main(["solve", cfg("regime_a.cfg"), "--out", str(sol)]) == 0
    doc = json.loads(sol.read_text())
    doc["payload"]["allocation"]["c_c"][0] *= 1.15
    sol.write_text(json.dumps(doc))
    rc = cli.main(["oracle-verify", cfg("regime_a.cfg"), "--solution", str(sol),
                   "--grid-points", "6", "--out", str(tmp_path / "oracle.json")])
    assert rc == 6
    report = json.loads((tmp_path / "oracle.json").read_text())["payload"]
    assert report["kkt_ok"] is False


def test_planner_seed_is_recorded_not_used(tmp_path, monkeypatch):
    monkeypatch.setenv("PLANNER_SEED", "1234")
    out = tmp_path / "checks.json"
    assert cli.main(["check-assumptions", cfg("regime_a.cfg"), "--out", str(out)]) == 0
    manifest = json.loads(out.read_text())["manifest"]
    assert manifest["parameters"]["planner_seed"] == "1234"

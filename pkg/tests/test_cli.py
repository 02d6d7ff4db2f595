import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "orliczlab.cli"]


def run_cli(*args, timeout=600):
    proc = subprocess.run([*CLI, *args], capture_output=True, text=True, timeout=timeout)
    return proc


def test_criteria_end_to_end(tmp_path):
    out = tmp_path / "rep.json"
    proc = run_cli("criteria", "--measure", "nu_alpha:1.5", "--family", "rosen", "--beta", "auto", "--output", str(out))
    assert proc.returncode == 0, proc.stderr
    body = json.loads(out.read_text())
    assert body["result"]["family"] == "rosen_beta"
    assert body["result"]["extra"]["assembled_constant"] > 0
    assert body["config"]["measure"] == "nu_alpha:1.5"


def test_byte_identical_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ("measure", "--measure", "abs_power:1.0", "--tol", "1e-9", "--csv-points", "5")
    assert run_cli(*args, "--output", str(a)).returncode == 0
    assert run_cli(*args, "--output", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_schedule_csv(tmp_path):
    csv_path = tmp_path / "sched.csv"
    proc = run_cli("schedule", "--F", "log", "--CF", "2.0", "--horizon", "3", "--csv", str(csv_path))
    assert proc.returncode == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,q,prefactor"
    assert len(lines) > 10


def test_simulate_csv(tmp_path):
    csv_path = tmp_path / "sim.csv"
    proc = run_cli("simulate", "--alpha", "1.5", "--t", "0.25", "--x", "3", "--n-traj", "1000", "--csv", str(csv_path))
    assert proc.returncode == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "x,estimate,stderr,envelope"
    x, est, err, env = map(float, lines[1].split(","))
    assert est <= env + 3 * err


def test_violation_exit_code():
    proc = run_cli("criteria", "--measure", "abs_power:1.0", "--scale", "1", "--family", "rosen", "--beta", "1.0")
    assert proc.returncode == 2


def test_malformed_config_names_key(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[criteria]\nfamilee = rosen\n")
    proc = run_cli("criteria", "--config", str(cfg))
    assert proc.returncode == 1
    assert "familee" in proc.stderr


def test_config_file_drives_run(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\ncommand = criteria\n\n[criteria]\nmeasure = nu_alpha:1.3\nfamily = rosen\nbeta = auto\n")
    proc = run_cli("criteria", "--config", str(cfg))
    assert proc.returncode == 0
    body = json.loads(proc.stdout)
    assert body["config"]["measure"] == "nu_alpha:1.3"


def test_oracle_space_file(tmp_path):
    sp = tmp_path / "space.txt"
    sp.write_text("# path\nstate 0 0.25\nstate 1 0.25\nstate 2 0.5\nedge 0 1 1.0\nedge 1 2 1.0\n")
    proc = run_cli("oracle", "--space", str(sp), "--check", "hardy", "--outer", "0,1")
    assert proc.returncode == 0
    body = json.loads(proc.stdout)
    res = body["result"]["result"]
    assert res["B"] <= res["C"] <= 11.1 * res["B"]


def test_measure_csv_export(tmp_path):
    csv_path = tmp_path / "m.csv"
    proc = run_cli("measure", "--measure", "u_alpha:1.5", "--csv-points", "9", "--csv", str(csv_path))
    assert proc.returncode == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "x,density,cdf"
    assert len(lines) == 10

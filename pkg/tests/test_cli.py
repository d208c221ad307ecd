import csv
import json
import subprocess
import sys

import pytest

from galconf.cli import main


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "galconf.cli", *args], capture_output=True, text=True)


def write_traj(path, N, dim, coeffs):
    path.write_text(json.dumps({"N": N, "dim": dim, "coeffs": coeffs}))
    return str(path)


def test_verify_single_model(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--N", "3", "--suite", "algebra", "--json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["summary"]["failed"] == 0
    assert "passed=" in capsys.readouterr().out


def test_verify_json_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("verify", "--N", "5", "--json", str(a)).returncode == 0
    assert run_cli("verify", "--N", "5", "--json", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_dimension_must_match_parity(capsys):
    assert main(["verify", "--N", "2", "--dim", "3"]) == 2
    assert "error" in capsys.readouterr().err


def test_charges_text(capsys):
    assert main(["charges", "--N", "1"]) == 0
    out = capsys.readouterr().out
    assert "h = 1/2*m^-1*p0^2" in out
    assert "c_1 = -t*p0 + m*q0" in out
    assert "C_0 = m*q'" in out


def test_charges_json_with_numeric_mass(capsys):
    assert main(["charges", "--N", "3", "--m", "2", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["model"]["N"] == 3
    assert "m" not in payload["hamiltonian"]


def test_transform_conformal(tmp_path, capsys):
    traj = write_traj(tmp_path / "t.json", 1, 3, [["0", "0", "0"], ["1", "0", "0"]])
    assert main(["transform", "--traj", traj, "--op", "conformal:c=1/2"]) == 0
    assert json.loads(capsys.readouterr().out)["coeffs"] == [["0", "0", "0"], ["1", "0", "0"]]


def test_transform_writes_csv(tmp_path):
    traj = write_traj(tmp_path / "t.json", 3, 3, [["0", "0", "0"], ["0", "0", "0"], ["1", "0", "0"]])
    out, table = tmp_path / "o.json", tmp_path / "o.csv"
    code = main(["transform", "--traj", traj, "--op", "shift:tau=1", "--out", str(out),
                 "--csv", str(table), "--grid", "0:1/2:3", "--digits", "6"])
    assert code == 0
    assert json.loads(out.read_text())["coeffs"][0] == ["1", "0", "0"]
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["t", "q1", "q2", "q3"]
    assert [r[1] for r in rows[1:]] == ["1", "0.25", "0"]


def test_transform_off_shell_fails(tmp_path, capsys):
    traj = write_traj(tmp_path / "t.json", 1, 3, [["0", "0", "0"]] * 2 + [["1", "0", "0"]])
    assert main(["transform", "--traj", traj, "--op", "shift:tau=1"]) == 1
    assert "off-shell" in capsys.readouterr().err


@pytest.mark.parametrize("op", ["spin:w=1", "boost:k=1,x=1"])
def test_transform_bad_op_is_usage_error(tmp_path, op):
    traj = write_traj(tmp_path / "t.json", 1, 3, [["0", "0", "0"]])
    assert main(["transform", "--traj", traj, "--op", op]) == 2


def test_missing_trajectory_is_usage_error(tmp_path):
    assert main(["transform", "--traj", str(tmp_path / "nope.json"), "--op", "shift:tau=1"]) == 2

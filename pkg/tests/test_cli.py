import csv
import io
import json
import subprocess
import sys

import pytest

from qcurv.cli import main, parse_alphas


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_alphas():
    assert parse_alphas("0.1:0.9:9") == pytest.approx(tuple(0.1 * i for i in range(1, 10)))
    assert parse_alphas("0.5:0.5:1") == (0.5,)


def test_circle_fourier_row(capsys):
    code, out, _ = run_cli(capsys, "circle", "--n", "256", "--state", "fourier:k=3", "--battery", "5")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"scenario", "config", "reports", "summary"}
    row = next(r for r in doc["reports"] if r["state"] == "fourier:k=3" and r["chart"] == "circle")
    assert abs(row["product"]) < 1e-12 and abs(row["bound"]) < 1e-12
    assert row["pass"] is True
    for key in ("chart", "state", "mean_x", "delta_x", "mean_p", "delta_p", "product", "bound",
                "boundary_analytic", "defects", "pass", "config_hash"):
        assert key in row
    assert doc["summary"]["pass"] is True
    assert row["config_hash"] == doc["summary"]["config_hash"]


def test_alpha_scan_sweep(capsys):
    code, out, _ = run_cli(capsys, "alpha-scan", "--alphas", "0.1:0.9:9", "--state",
                           "gauss:center=0,width=0.4", "--battery", "2")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["table"]) == 9
    assert doc["config"]["alphas"] == pytest.approx([0.1 * i for i in range(1, 10)])


def test_sphere_stereo_bound(capsys):
    code, out, _ = run_cli(capsys, "report", "--chart", "sphere-stereo", "--n", "48",
                           "--state", "gauss:width=1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["bound"]) >= 0.5 - 1e-6
    assert rows[0]["pass"] == "true"


def test_table_format(capsys):
    code, out, _ = run_cli(capsys, "report", "--chart", "torus", "--state", "fourier:k=1",
                           "--format", "table")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["chart", "state"]
    widths = {len(l) for l in lines[:2]}
    assert len(widths) == 1  # fixed columns
    assert "PASS" in out


@pytest.mark.parametrize("argv", [["bogus"], ["circle", "--frobnicate"], [],
                                  ["circle", "--n", "15"], ["circle", "--state", "fourier:k=0.5"],
                                  ["alpha-scan", "--alphas", "0:1"], ["circle", "--hbar", "-1"]])
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 2
    assert "usage" in capsys.readouterr().err


def test_io_error(capsys, tmp_path):
    code, _, err = run_cli(capsys, "report", "--output", str(tmp_path / "missing" / "x.json"))
    assert code == 1 and "cannot write" in err
    code, _, _ = run_cli(capsys, "circle", "--config", str(tmp_path / "nope.json"))
    assert code == 1


def test_failed_check_exit_code(capsys):
    # a needle state on a coarse grid breaks the closed-form agreement
    code, out, _ = run_cli(capsys, "report", "--chart", "alpha", "--alpha", "0.9", "--n", "16",
                           "--state", "gauss:center=pi,width=0.05")
    doc = json.loads(out)
    assert code == (0 if doc["summary"]["pass"] else 3)
    assert not doc["summary"]["pass"]


def test_config_file_and_override(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"scenario": "torus", "battery": 3, "seed": 2, "resolution": 64}))
    code, out, _ = run_cli(capsys, "torus", "--config", str(path), "--battery", "4")
    assert code == 0
    cfg = json.loads(out)["config"]
    assert cfg["battery"] == 4 and cfg["seed"] == 2 and cfg["resolution"] == 64
    path.write_text(json.dumps({"scenario": "circle"}))
    code, _, _ = run_cli(capsys, "torus", "--config", str(path))
    assert code == 2
    path.write_text("{not json")
    code, _, _ = run_cli(capsys, "torus", "--config", str(path))
    assert code == 2


def test_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("QCURV_SEED", "17")
    code, out, _ = run_cli(capsys, "curve", "--battery", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["seed"] == 17
    assert any(r["state"].startswith("random:seed=17,") for r in doc["reports"])
    monkeypatch.setenv("QCURV_SEED", "x")
    assert run_cli(capsys, "curve", "--battery", "2")[0] == 2


def test_output_stable(capsys):
    a = run_cli(capsys, "curve", "--battery", "3", "--format", "csv")[1]
    b = run_cli(capsys, "curve", "--battery", "3", "--format", "csv")[1]
    assert a == b


def test_export_state(capsys, tmp_path):
    path = tmp_path / "psi.csv"
    code, _, _ = run_cli(capsys, "report", "--state", "fourier:k=1", "--export-state", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "node,re,im"


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run_cli(capsys, "report", "--format", "csv", "-o", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("chart,state,")


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "qcurv", "report", "--state", "fourier:k=2"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["reports"][0]["mean_p"] == pytest.approx(2.0)

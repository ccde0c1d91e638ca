import subprocess
import sys
from pathlib import Path

import pytest

BASE = [sys.executable, "-m", "torusdirac.cli"]


def run_cli(*args, cwd=None):
    return subprocess.run(BASE + list(args), capture_output=True, text=True, cwd=cwd)


def test_geometry_default_passes(tmp_path):
    r = run_cli("--out", str(tmp_path), "--no-timestamp", "geometry")
    assert r.returncode == 0, r.stderr
    assert "frame identity" in r.stdout
    assert (tmp_path / "geometry.csv").exists()


def test_config_rejects_equal_radii(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("torus:\n  a: 2.0\n  c: 2.0\n")
    r = run_cli("--config", str(cfg), "geometry")
    assert r.returncode == 2
    assert "c != a" in r.stderr


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("taurus:\n  a: 0.5\n")
    r = run_cli("--config", str(cfg), "geometry")
    assert r.returncode == 2
    assert "unknown config key" in r.stderr


def test_config_rejects_empty_outputs(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("outputs: []\n")
    r = run_cli("--config", str(cfg), "spectrum")
    assert r.returncode == 2
    assert "outputs" in r.stderr


def test_spectrum_writes_table_and_complex_hint(tmp_path):
    r = run_cli("--out", str(tmp_path), "--no-timestamp", "spectrum")
    assert r.returncode == 0, r.stderr
    table = (tmp_path / "spectrum_constant_vf.csv").read_text().splitlines()
    assert table[0] == "n,lambda,residual"
    assert len(table) == 7
    cfg = tmp_path / "complex.yaml"
    cfg.write_text('field:\n  C2: "0.2j"\n')
    r2 = run_cli("--config", str(cfg), "--out", str(tmp_path), "spectrum")
    assert r2.returncode == 1
    assert "verify" in r2.stderr


def test_verify_passes_and_negative_control_fails(tmp_path):
    r = run_cli("--out", str(tmp_path), "--no-timestamp", "verify")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "overall: PASS" in r.stdout
    report = (tmp_path / "verify_report.txt").read_text()
    assert "known discrepancy" in report
    rn = run_cli("--out", str(tmp_path), "--no-timestamp", "--negative-control", "verify")
    assert rn.returncode == 1
    assert "FAIL" in rn.stdout


def test_csv_determinism(tmp_path):
    d1, d2 = tmp_path / "one", tmp_path / "two"
    for d in (d1, d2):
        d.mkdir()
        r = run_cli("--out", str(d), "--no-timestamp", "analytic")
        assert r.returncode == 0, r.stderr
    for name in ("case1_spectrum.csv", "case2_spectrum.csv", "case2_wavefunctions.csv"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_sweep_tracks_constraint_and_rejects_bad_input(tmp_path):
    r = run_cli("--out", str(tmp_path), "--no-timestamp", "sweep", "a", "0.1:0.9:5")
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "sweep_a.csv").read_text().splitlines()
    assert len(lines) == 6
    header = lines[0].split(",")
    icon = header.index("c_constraint")
    ic2 = header.index("C2_constraint_im")
    import numpy as np
    for row in lines[1:]:
        vals = [float(tok) for tok in row.split(",")]
        a = vals[0]
        assert vals[icon] == pytest.approx(0.5 * a ** 2 / np.sqrt(1 - a), rel=1e-12)
        assert vals[ic2] == pytest.approx(np.sqrt(1 - a) / a ** 4, rel=1e-12)
    r_empty = run_cli("--out", str(tmp_path), "sweep", "a", "")
    assert r_empty.returncode == 2
    r_badcount = run_cli("--out", str(tmp_path), "sweep", "a", "0.1:0.9:0")
    assert r_badcount.returncode == 2


def test_sweep_single_point_consistent_with_analytic(tmp_path):
    r = run_cli("--out", str(tmp_path), "--no-timestamp", "sweep", "alpha", "1.0")
    assert r.returncode == 0
    row = (tmp_path / "sweep_alpha.csv").read_text().splitlines()[1].split(",")
    # eps columns at alpha=1, C1=0 are n + 1/2
    assert float(row[1]) == pytest.approx(0.5, abs=1e-10)
    assert float(row[3]) == pytest.approx(1.5, abs=1e-10)


def test_spectrum_coefficient_export(tmp_path):
    cfg = tmp_path / "coef.yaml"
    cfg.write_text("outputs: [csv, coefficients]\n")
    r = run_cli("--config", str(cfg), "--out", str(tmp_path), "--no-timestamp",
                "spectrum")
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "sl_coefficients_plus.csv").read_text().splitlines()
    assert lines[0] == "x,re_sigma,im_sigma,re_rho,im_rho"
    assert len(lines) == 1025


def test_timestamp_toggle(tmp_path):
    d1, d2 = tmp_path / "ts", tmp_path / "nots"
    d1.mkdir(), d2.mkdir()
    assert run_cli("--out", str(d1), "geometry").returncode == 0
    assert run_cli("--out", str(d2), "--no-timestamp", "geometry").returncode == 0
    assert (d1 / "geometry.csv").read_text().startswith("# written ")
    assert (d2 / "geometry.csv").read_text().startswith("x,")

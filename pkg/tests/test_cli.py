"""Smoke tests for the qkdsim command line."""

from pathlib import Path
import subprocess
import sys

import pytest

ROOT = Path(__file__).resolve().parents[1]


def _qkdsim(*args):
    return subprocess.run([sys.executable, "qkdsim.py", *args], cwd=ROOT, capture_output=True, text=True)


def _last_value(path, column):
    lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if not line.startswith("# ")]
    index = lines[0].split(",").index(column)
    return float(lines[-1].split(",")[index])


def test_pass_key_writes_csv(tmp_path):
    result = _qkdsim("pass-key", "--out", str(tmp_path), "--set", "source.d_b_cps=250")
    assert result.returncode == 0, result.stderr
    path = tmp_path / "pass-key.csv"
    assert result.stdout.strip() == str(path)
    assert _last_value(path, "cumulative_bits") == pytest.approx(1.2e5, rel=0.05)


def test_scenario_file_is_read(tmp_path):
    scenario = tmp_path / "offset.scn"
    scenario.write_text("orbit.ground_track_offset_km = 500  # km\nsource.d_b_cps = 250\n", encoding="utf-8")
    result = _qkdsim("pass-key", "--scenario", str(scenario), "--out", str(tmp_path))
    assert result.returncode == 0, result.stderr
    assert _last_value(tmp_path / "pass-key.csv", "cumulative_bits") == pytest.approx(1.8213e4, rel=0.005)


def test_unknown_command_is_a_usage_error(tmp_path):
    result = _qkdsim("teleport", "--out", str(tmp_path))
    assert result.returncode == 1
    assert "Unknown command" in result.stderr


def test_malformed_override_is_a_usage_error(tmp_path):
    assert _qkdsim("pass-key", "--out", str(tmp_path), "--set", "source.d_b_cps").returncode == 1


def test_invalid_value_is_a_domain_error(tmp_path):
    result = _qkdsim("pass-key", "--out", str(tmp_path), "--set", "orbit.altitude_km=abc")
    assert result.returncode == 2
    assert "orbit.altitude_km" in result.stderr
    assert not (tmp_path / "pass-key.csv").exists()


def test_missing_scenario_file_fails(tmp_path):
    result = _qkdsim("pass-key", "--scenario", str(tmp_path / "absent.scn"), "--out", str(tmp_path))
    assert result.returncode == 2


def test_sweep_writes_one_file_per_value(tmp_path):
    result = _qkdsim("pass-profile", "--out", str(tmp_path), "--sweep", "orbit.ground_track_offset_km=0,250,500")
    assert result.returncode == 0, result.stderr
    assert sorted(p.name for p in tmp_path.glob("*.csv")) == [
        "pass-profile__orbit.ground_track_offset_km=0.0.csv",
        "pass-profile__orbit.ground_track_offset_km=250.0.csv",
        "pass-profile__orbit.ground_track_offset_km=500.0.csv",
    ]


def test_montecarlo_is_reproducible_for_a_seed(tmp_path):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        result = _qkdsim("montecarlo", "--out", str(out), "--seed", "5", "--set", "sim.duration_s=0.05")
        assert result.returncode == 0, result.stderr
        outputs.append((out / "montecarlo.csv").read_bytes())
    assert outputs[0] == outputs[1]
    assert b"# override: sim.rng_seed = 5" in outputs[0]


def test_single_wavelength_link_sweep(tmp_path):
    result = _qkdsim("link-sweep", "--out", str(tmp_path), "--set", "sweep.wavelengths_m=808e-9",
                     "--set", "sweep.a_atm0_values_db=3", "--set", "integration.dt_s=10")
    assert result.returncode == 0, result.stderr
    assert (tmp_path / "link-sweep.csv").exists()


def test_montecarlo_accepts_a_duration_that_is_not_whole_blocks(tmp_path):
    result = _qkdsim("montecarlo", "--out", str(tmp_path), "--set", "sim.duration_s=0.1001")
    assert result.returncode == 0, result.stderr
    assert b"clock_offset_s" in (tmp_path / "montecarlo.csv").read_bytes()

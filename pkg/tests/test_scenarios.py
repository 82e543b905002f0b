import subprocess
import sys

import numpy as np
import pytest

from wigcol import M_EFF, WaveFunction, double_barrier
from wigcol.scenarios import (ConfigError, count_well_maxima,
                              energy_trace_comparison, load_summary,
                              parse_config, run_scenario, transition_window)
from wigcol.spectral import diagonalize, well_states

SMALL_GRID = """
[grid]
nx = 1024
dx = 0.8
x0 = -409.6
"""

FREE_MOMENTUM = """
[scenario]
id = free_absorb
""" + SMALL_GRID + """
[potential]
kind = free

[packet]
kind = gaussian
x_c = -150.0
sigma = 25.0
k0 = 0.1573239

[collision]
model = momentum
t_start = 5.0
n_steps = 4
dwell = 2.0
quantum = 0.1080065
sign = +1

[run]
dt = 0.25
t_total = 30.0
engine = split

[output]
stride = 20
wigner_every = 2
wigner_decimate = 4
spectral_every = 2
trajectory = true
"""


def write(tmp_path, text, name="config.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestConfigParsing:
    def test_unknown_section(self, tmp_path):
        path = write(tmp_path, "[scenario]\nid = free_absorb\n[magic]\nx = 1\n")
        with pytest.raises(ConfigError, match="unknown section"):
            parse_config(path)

    def test_unknown_key(self, tmp_path):
        path = write(tmp_path, "[scenario]\nid = free_absorb\n[grid]\nfoo = 1\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(path)

    def test_unknown_id(self, tmp_path):
        path = write(tmp_path, "[scenario]\nid = warp_drive\n")
        with pytest.raises(ConfigError, match="unknown scenario id"):
            parse_config(path)

    def test_missing_id(self, tmp_path):
        path = write(tmp_path, "[grid]\nnx = 1024\n")
        with pytest.raises(ConfigError, match="missing"):
            parse_config(path)

    def test_bad_value(self, tmp_path):
        path = write(tmp_path,
                     "[scenario]\nid = free_absorb\n[grid]\nnx = many\n")
        with pytest.raises(ConfigError, match="bad value"):
            parse_config(path)

    def test_defaults_fill_in(self, tmp_path):
        path = write(tmp_path, "[scenario]\nid = free_absorb\n")
        cfg = parse_config(path)
        assert cfg.grid.nx == 4096
        assert cfg.grid.x0 == pytest.approx(-409.6)
        assert cfg.n_steps == 40


@pytest.fixture(scope="module")
def levels(grid):
    profile = double_barrier(grid, 12.0, 0.3, 16.0)
    basis = diagonalize(profile, M_EFF)
    idx = well_states(basis, -8.0, 8.0)
    return grid, basis, idx


class TestWellMaxima:

    def test_first_level_has_one(self, levels):
        grid, basis, idx = levels
        density = np.abs(basis.modes[:, idx[0]]) ** 2 * grid.dx
        assert count_well_maxima(density, grid, -8.0, 8.0) == 1

    def test_second_level_has_two(self, levels):
        grid, basis, idx = levels
        density = np.abs(basis.modes[:, idx[1]]) ** 2 * grid.dx
        assert count_well_maxima(density, grid, -8.0, 8.0) == 2

    def test_empty_well(self, grid):
        from wigcol import gaussian_packet
        psi = gaussian_packet(grid, -200.0, 15.0, 0.2)
        assert count_well_maxima(np.abs(psi.amp) ** 2, grid, -8.0, 8.0) == 0


class TestEnergyTraceComparison:
    def test_self_comparison_is_zero(self):
        t = np.linspace(0, 100, 50)
        e = np.sin(t / 30.0)
        assert energy_trace_comparison(t, e, t, e) == 0.0

    def test_interpolated_offset(self):
        t = np.linspace(0, 100, 201)
        e = np.linspace(0, 1, 201)
        assert energy_trace_comparison(t, e, t, e + 0.05) == pytest.approx(0.05)

    def test_disjoint_ranges_rejected(self):
        with pytest.raises(ValueError):
            energy_trace_comparison([0, 1], [0, 0], [2, 3], [0, 0])

    def test_transition_window(self):
        t = np.linspace(0, 1000, 2001)
        half = 400.0
        e = 0.096 - 0.073 * np.sin(np.pi * np.clip(t, 0, half) / (2 * half)) ** 2
        lo, hi, ext = transition_window(t, e)
        assert ext == pytest.approx(half, abs=2)
        # 2% and 98% crossings of the sin^2 swing
        assert lo == pytest.approx(2 * half / np.pi * np.arcsin(np.sqrt(0.02)),
                                   abs=2)
        assert hi == pytest.approx(2 * half / np.pi * np.arcsin(np.sqrt(0.98)),
                                   abs=2)


class TestRunScenario:
    def test_free_momentum_outputs(self, tmp_path):
        cfg = parse_config(write(tmp_path, FREE_MOMENTUM))
        out = tmp_path / "run"
        metrics = run_scenario(cfg, out)
        assert (out / "summary.csv").exists()
        assert (out / "potential.csv").exists()
        assert (out / "config_echo.ini").exists()
        assert (out / "trajectory.csv").exists()
        snaps = sorted((out / "snapshots").iterdir())
        kinds = {p.name.split("_t")[0] for p in snaps}
        assert {"wigner", "marginal_x", "marginal_k", "spectral"} <= kinds
        summary = load_summary(out / "summary.csv")
        assert np.all(np.abs(summary["norm"] - 1) < 1e-6)
        assert not summary["positivity_flag"].any()
        assert metrics["final_E"] > metrics["initial_E"]

    def test_determinism(self, tmp_path):
        cfg_path = write(tmp_path, FREE_MOMENTUM)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run_scenario(parse_config(cfg_path), out1)
        run_scenario(parse_config(cfg_path), out2)
        for name in ("summary.csv", "potential.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        w1 = sorted((out1 / "snapshots").glob("wigner_*"))
        w2 = sorted((out2 / "snapshots").glob("wigner_*"))
        assert [p.name for p in w1] == [p.name for p in w2]
        assert all(a.read_bytes() == b.read_bytes() for a, b in zip(w1, w2))

    def test_positivity_demo(self, tmp_path):
        text = """
[scenario]
id = positivity_demo

[grid]
nx = 1024
dx = 0.8

[packet]
kind = gaussian
x_c = -150.0
sigma = 15.0
k0 = 0.2
"""
        cfg = parse_config(write(tmp_path, text))
        metrics = run_scenario(cfg, tmp_path / "pos")
        assert metrics["blind_min_Q"] < -1e-10
        assert metrics["strict_raised"]
        rows = (tmp_path / "pos" / "positivity.csv").read_text().splitlines()
        assert rows[0] == "case,min_Q,violated"
        table = {r.split(",")[0]: r.split(",")[1:] for r in rows[1:]}
        assert table["blind_non_member"][1] == "true"
        assert table["strict_non_member_raises"][1] == "true"
        assert table["strict_member"][1] == "false"

    def test_reconstruction_demo(self, tmp_path):
        text = """
[scenario]
id = reconstruction_demo

[grid]
nx = 1024
dx = 0.8

[packet]
kind = gaussian
x_c = -100.0
sigma = 15.0
k0 = 0.2
"""
        cfg = parse_config(write(tmp_path, text))
        metrics = run_scenario(cfg, tmp_path / "rec")
        assert metrics["mixture_rejected"]
        rows = (tmp_path / "rec" / "reconstruction.csv").read_text().splitlines()
        table = {r.split(",")[0]: r.split(",")[1:] for r in rows[1:]}
        assert float(table["packet"][1]) >= 1 - 1e-8
        assert float(table["post_collision"][1]) >= 1 - 1e-8


class TestCli:
    def run_cli(self, *args):
        return subprocess.run([sys.executable, "-m", "wigcol.cli", *args],
                              capture_output=True, text=True)

    def test_run_and_exit_codes(self, tmp_path):
        cfg = write(tmp_path, FREE_MOMENTUM)
        out = tmp_path / "cli_out"
        result = self.run_cli("run", str(cfg), "--out", str(out), "--quiet")
        assert result.returncode == 0, result.stderr
        assert (out / "summary.csv").exists()

    def test_config_error_exit_code(self, tmp_path):
        bad = write(tmp_path, "[scenario]\nid = nope\n")
        result = self.run_cli("run", str(bad))
        assert result.returncode == 1
        assert "config error" in result.stderr

    def test_resonances(self, tmp_path):
        text = """
[scenario]
id = barrier_absorb

[potential]
kind = double_barrier
barrier_width = 2.0
height = 0.3
well_width = 16.0
"""
        cfg = write(tmp_path, text)
        result = self.run_cli("resonances", str(cfg), "--e-max", "0.12")
        assert result.returncode == 0, result.stderr
        values = [float(v) for v in result.stdout.split()[1:]]
        assert abs(values[0] - 0.023) < 3e-3
        assert abs(values[1] - 0.096) < 5e-3

"""CLI pipeline: artifacts, exit codes, determinism."""

import json
import os

import numpy as np
import pytest

from fibervortex import cli
from fibervortex import fileio as fio

TINY = """
fiber.radius_m = 200e-9
fiber.wavelength_m = 700e-9
pol.kind = circular
field.power_w = 250e-9
gauge.kappa0_per_m = 2e9
gauge.detuning_rad_s = -6e7
sim.atoms = 1500
sim.mass_kg = 1.44316060e-25
sim.a_s_m = 4.76e-9
sim.omega_r_rad_s = 9000
sim.omega_z_rad_s = 9000
sim.eta_m = 1.2e-6
sim.imag_tol = 1e-7
grid.nx = 32
grid.ny = 32
grid.nz = 32
grid.dx_m = 150e-9
"""


@pytest.fixture()
def tiny_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(TINY)
    return str(path)


def run_cli(*argv):
    return cli.main(list(argv))


class TestModes:
    def test_prints_and_csv(self, tiny_config, tmp_path, capsys):
        csv = str(tmp_path / "modes.csv")
        rc = run_cli("modes", tiny_config, "--csv", csv)
        assert rc == 0
        out = capsys.readouterr().out
        assert "V number" in out
        assert "HE11" in out
        lines = open(csv).read().splitlines()
        assert lines[0] == "ell,branch,beta,h,q,s,C"
        assert len(lines) == 2  # single guided mode

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("fiber.radius_m = 200e-9\n")
        assert run_cli("modes", str(bad)) == cli.EXIT_CONFIG
        assert run_cli("modes", str(tmp_path / "nope.cfg")) == cli.EXIT_CONFIG


class TestFieldGauge:
    def test_field_then_gauge(self, tiny_config, tmp_path, capsys):
        out1 = str(tmp_path / "f")
        assert run_cli("field", tiny_config, "-o", out1) == 0
        evf = os.path.join(out1, "field.evf")
        assert os.path.exists(evf)
        assert os.path.exists(os.path.join(out1, "field.json"))
        gf = fio.read_grid(evf, expect_magic=fio.MAGIC_FIELD)
        assert gf.data.shape[0] == 3
        assert gf.meta["power_w"] == pytest.approx(250e-9)

        out2 = str(tmp_path / "g")
        rc = run_cli("gauge", tiny_config, "--field", evf, "-o", out2,
                     "--check-curl")
        assert rc == 0
        out = capsys.readouterr().out
        assert "curl" in out
        gg = fio.read_grid(os.path.join(out2, "gauge.gau"),
                           expect_magic=fio.MAGIC_GAUGE)
        assert gg.data.shape[0] == 3
        assert gg.meta["s_tilde"] > 0

    def test_gauge_missing_upstream(self, tiny_config, tmp_path):
        rc = run_cli("gauge", tiny_config, "--field",
                     str(tmp_path / "absent.evf"), "-o", str(tmp_path / "g"))
        assert rc == cli.EXIT_UPSTREAM


class TestGroundstateDetect:
    def test_groundstate_artifacts(self, tiny_config, tmp_path):
        out = str(tmp_path / "gs")
        assert run_cli("groundstate", tiny_config, "-o", out) == 0
        psi = os.path.join(out, "ground.psi1")
        gf = fio.read_grid(psi, expect_magic=fio.MAGIC_PSI)
        assert gf.data.shape == (1, 32, 32, 32)
        obs = open(os.path.join(out, "observables.csv")).read().splitlines()
        assert obs[0].startswith("step,t,norm")
        assert len(obs) == 2
        prov = json.load(open(os.path.join(out, "provenance.json")))
        assert len(prov["config_sha256"]) == 64

    def test_detect_on_ground_state(self, tiny_config, tmp_path):
        gs = str(tmp_path / "gs")
        run_cli("groundstate", tiny_config, "-o", gs)
        out = str(tmp_path / "det")
        rc = run_cli("detect", tiny_config, "--psi",
                     os.path.join(gs, "ground.psi1"), "-o", out,
                     "--isosurface", "0.3")
        assert rc == 0
        assert open(os.path.join(out, "skeleton.csv")).read().splitlines()[0] \
            == "ring_id,point_index,x,y,z,charge"
        summary = json.load(open(os.path.join(out, "detect.json")))
        assert summary["n_rings"] == 0  # vortex-free ground state
        sob = fio.read_grid(os.path.join(out, "sobel.gau"))
        assert sob.meta["kind"] == "sobel"
        mesh = open(os.path.join(out, "isosurface.mesh")).read().splitlines()
        n_v, n_f = (int(t) for t in mesh[0].split())
        assert n_v > 0 and n_f > 0

    def test_detect_missing_upstream(self, tiny_config, tmp_path):
        rc = run_cli("detect", tiny_config, "--psi",
                     str(tmp_path / "none.psi1"), "-o", str(tmp_path / "d"))
        assert rc == cli.EXIT_UPSTREAM

    def test_determinism_bit_identical_csv(self, tiny_config, tmp_path):
        """Identical config -> identical observables CSV, byte for byte."""
        a = str(tmp_path / "a")
        b = str(tmp_path / "b")
        run_cli("groundstate", tiny_config, "-o", a)
        run_cli("groundstate", tiny_config, "-o", b)
        csv_a = open(os.path.join(a, "observables.csv"), "rb").read()
        csv_b = open(os.path.join(b, "observables.csv"), "rb").read()
        assert csv_a == csv_b
        psi_a = open(os.path.join(a, "ground.psi1"), "rb").read()
        psi_b = open(os.path.join(b, "ground.psi1"), "rb").read()
        assert psi_a == psi_b


class TestEvolve:
    def test_short_evolution(self, tiny_config, tmp_path):
        gs = str(tmp_path / "gs")
        run_cli("groundstate", tiny_config, "-o", gs)
        out = str(tmp_path / "ev")
        cfg2 = tmp_path / "run2.cfg"
        cfg2.write_text(TINY + "\nsim.steps = 300\nsim.sample_every = 100\n")
        rc = run_cli("evolve", str(cfg2), "--psi",
                     os.path.join(gs, "ground.psi1"), "-o", out)
        assert rc == 0
        rows = open(os.path.join(out, "observables.csv")).read().splitlines()
        assert len(rows) == 1 + 4  # header + samples at 0,100,200,300
        norm0 = float(rows[1].split(",")[2])
        norm1 = float(rows[-1].split(",")[2])
        assert abs(norm1 - norm0) / norm0 < 1e-8


@pytest.mark.slow
class TestScissorsCli:
    def test_protocol_artifacts(self, tmp_path):
        """Interface-level smoke: record CSV, fit CSV/report, figure.

        The tiny cloud here is far from the hydrodynamic regime, so the
        frequency against the scissors formula is gated in the acceptance
        suite, not here.
        """
        cfg_text = TINY.replace("sim.omega_z_rad_s = 9000",
                                "sim.omega_z_rad_s = 6000")
        cfg_text += ("\nscissors.t_final_s = 6e-3\nscissors.sample_every = 25\n"
                     "scissors.n_modes = 1\ntilt.theta0_rad = 0.02\n"
                     "sim.dt_s = 1e-6\nsim.half_factor = true\n")
        cfg = tmp_path / "sc.cfg"
        cfg.write_text(cfg_text)
        gs = str(tmp_path / "gs")
        assert run_cli("groundstate", str(cfg), "-o", gs) == 0
        out = str(tmp_path / "sc")
        rc = run_cli("scissors", str(cfg), "--psi",
                     os.path.join(gs, "ground.psi1"), "-o", out, "--figures")
        assert rc == 0
        rec_rows = open(os.path.join(out, "scissors.csv")).read().splitlines()
        assert rec_rows[0] == "t,angle,rz_moment"
        assert len(rec_rows) > 100
        fit_rows = open(os.path.join(out, "fit.csv")).read().splitlines()
        assert fit_rows[0] == "omega_minus,omega_plus,midpoint,damping,residual"
        vals = dict(zip(fit_rows[0].split(","),
                        (float(v) for v in fit_rows[1].split(","))))
        t_span = 6e-3
        sample_dt = 25e-6
        assert 2 * np.pi / t_span <= vals["midpoint"] <= np.pi / sample_dt
        assert vals["residual"] < 0.10
        assert os.path.exists(os.path.join(out, "fit_report.txt"))
        assert os.path.exists(os.path.join(out, "scissors.png"))


@pytest.mark.slow
class TestSweepCli:
    def test_power_sweep_summary(self, tmp_path):
        cfg = tmp_path / "sw.cfg"
        cfg.write_text(TINY + "\nsweep.key = field.power_w\n"
                              "sweep.values = 0, 120e-9\n")
        out = str(tmp_path / "sw")
        assert run_cli("sweep", str(cfg), "-o", out, "--figures") == 0
        rows = open(os.path.join(out, "sweep.csv")).read().splitlines()
        assert rows[0].split(",")[0] == "field.power_w"
        assert len(rows) == 3
        counts = [int(r.split(",")[1]) for r in rows[1:]]
        assert counts == sorted(counts)
        assert os.path.exists(os.path.join(out, "sweep.png"))


def test_figures_render(tiny_config, tmp_path):
    out = str(tmp_path / "f")
    assert run_cli("field", tiny_config, "-o", out, "--figures") == 0
    assert os.path.exists(os.path.join(out, "field.png"))

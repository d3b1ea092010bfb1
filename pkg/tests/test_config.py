"""Strict config parsing: full-error collection, unit-suffix policing."""

import numpy as np
import pytest

from fibervortex import config as cfg_mod
from fibervortex.config import (REQUIRED_KEYS, ConfigError, parse_config_text)

BASELINE = """
# published toroidal-trap configuration
fiber.radius_m = 200e-9
fiber.wavelength_m = 700e-9
field.power_w = 372e-9
gauge.kappa0_per_m = 8.05289e6
gauge.detuning_rad_s = -6.28e10
sim.atoms = 1e5
sim.mass_kg = 1.44316060e-25
sim.a_s_m = 4.76e-9
sim.omega_r_rad_s = 7071
sim.omega_z_rad_s = 7071
sim.eta_m = 3.20e-6
grid.nx = 256
grid.ny = 256
grid.nz = 256
grid.dx_m = 50e-9
"""


def test_baseline_parses_cleanly():
    cfg = parse_config_text(BASELINE)
    assert cfg["sim.atoms"] == 1e5
    assert cfg["sim.a_s_m"] == 4.76e-9
    assert cfg["grid.nx"] == 256
    assert cfg["grid.dx_m"] == 50e-9
    assert cfg["sim.eta_m"] == 3.20e-6
    assert cfg["fiber.n2"] == 1.0  # default
    params = cfg.sim_params()
    assert params.omega_r == 7071
    spec = cfg.fiber_spec()
    assert abs(spec.n1 - 1.4553) < 2e-4  # Sellmeier fill-in
    grid = cfg.grid()
    assert grid.shape == (256, 256, 256)


def test_empty_file_lists_every_required_key():
    with pytest.raises(ConfigError) as exc:
        parse_config_text("")
    missing = {i.key for i in exc.value.issues if i.kind == "MissingKey"}
    assert missing == set(REQUIRED_KEYS)


def test_odd_grid_dim_range_error():
    text = BASELINE.replace("grid.nx = 256", "grid.nx = 31")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    issues = [i for i in exc.value.issues if i.key == "grid.nx"]
    assert issues and issues[0].kind == "RangeError"
    assert issues[0].line > 0


def test_unknown_key_rejected():
    with pytest.raises(ConfigError) as exc:
        parse_config_text(BASELINE + "\nsim.banana = 3\n")
    kinds = {(i.kind, i.key) for i in exc.value.issues}
    assert ("UnknownKey", "sim.banana") in kinds


def test_unit_mismatch_names_expected_key():
    """Keys missing their unit suffix are flagged as UnitMismatch with a
    pointer to the suffixed spelling (the Hz / rad-s trap)."""
    text = BASELINE.replace("sim.omega_r_rad_s = 7071", "sim.omega_r = 7071")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    issues = {i.kind: i for i in exc.value.issues}
    assert "UnitMismatch" in issues
    assert "sim.omega_r_rad_s" in issues["UnitMismatch"].message


def test_errors_collected_not_fail_fast():
    text = BASELINE.replace("grid.nx = 256", "grid.nx = 31") \
        + "\nsim.banana = 3\nsim.omega_q = nope\n"
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    kinds = {i.kind for i in exc.value.issues}
    assert {"RangeError", "UnknownKey"} <= kinds
    assert len(exc.value.issues) >= 3


def test_zero_detuning_rejected():
    text = BASELINE.replace("gauge.detuning_rad_s = -6.28e10",
                            "gauge.detuning_rad_s = 0")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert any(i.key == "gauge.detuning_rad_s" and i.kind == "RangeError"
               for i in exc.value.issues)


def test_every_dimensional_key_carries_suffix():
    """Schema self-check: dimensional keys end in a unit suffix."""
    for key, spec in cfg_mod.SCHEMA.items():
        if spec.dimensional:
            assert key.endswith(cfg_mod._UNIT_SUFFIXES), key


def test_floatlist_parsing():
    cfg = parse_config_text(BASELINE + "\nsweep.values = 0, 50e-9 100e-9\n")
    assert cfg["sweep.values"] == (0.0, 50e-9, 100e-9)


def test_bool_parsing():
    cfg = parse_config_text(BASELINE + "\nsim.half_factor = true\n")
    assert cfg["sim.half_factor"] is True
    with pytest.raises(ConfigError):
        parse_config_text(BASELINE + "\nsim.half_factor = maybe\n")


def test_provenance_hash_changes_with_text():
    c1 = parse_config_text(BASELINE)
    c2 = parse_config_text(BASELINE + "\nsim.steps = 10\n")
    assert c1.sha256 != c2.sha256
    prov = c1.provenance()
    assert prov["schema_version"] == cfg_mod.SCHEMA_VERSION
    assert len(prov["config_sha256"]) == 64


def test_domain_builders():
    cfg = parse_config_text(BASELINE)
    gspec = cfg.gauge_spec()
    assert gspec.detuning_delta == -6.28e10
    assert np.isclose(np.linalg.norm(np.asarray(gspec.dipole)),
                      cfg["gauge.dipole_moment_c_m"])
    scfg_text = BASELINE.replace("sim.omega_z_rad_s = 7071",
                                 "sim.omega_z_rad_s = 2828")
    scfg = parse_config_text(scfg_text).scissors_config()
    assert scfg.omega_z == 2828

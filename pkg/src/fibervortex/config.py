"""Flat key-value run configuration with strict schema validation.

Format: one ``section.key = value`` per line, ``#`` comments. Every
dimensional key carries its unit in the name (``_m``, ``_s``, ``_rad_s``,
``_w``, ``_per_m``, ``_kg``, ``_c_m``, ``_rad``), which makes the Hz
versus rad/s ambiguity impossible to smuggle through review. Unknown keys
are rejected; validation collects every error instead of stopping at the
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import fiber as fiber_mod
from . import gauge as gauge_mod
from . import gpe as gpe_mod
from . import scissors as scissors_mod
from .constants import RB87_D2_DIPOLE_CM
from .fileio import config_hash
from .grids import Grid3D

SCHEMA_VERSION = 1

_UNIT_SUFFIXES = ("_m", "_s", "_rad_s", "_w", "_per_m", "_kg", "_c_m", "_rad")


class _Required:
    def __repr__(self):
        return "<required>"


REQUIRED = _Required()


@dataclass(frozen=True)
class Key:
    """Schema entry: type, default (REQUIRED for mandatory), range check."""

    typ: str                                   # int | float | bool | str | floatlist
    default: object = REQUIRED
    check: Optional[Callable] = None
    help: str = ""
    dimensional: bool = False


def _positive(v):
    return v > 0 or "must be > 0"


def _nonneg(v):
    return v >= 0 or "must be >= 0"


def _nonzero(v):
    return v != 0 or "must be nonzero"


def _grid_dim(v):
    if v < 32:
        return "grid dims must be >= 32"
    if v % 2:
        return "grid dims must be even"
    return True


def _unit_interval(v):
    return 0.0 <= v <= 1.0 or "must lie in [0, 1]"


def _pol_kind(v):
    return v in ("circular", "linear", "elliptical") or \
        "must be circular | linear | elliptical"


def _pm_one(v):
    return v in (-1, 1) or "must be +1 or -1"


SCHEMA = {
    # fiber
    "fiber.radius_m": Key("float", REQUIRED, _positive, "fiber radius", True),
    "fiber.wavelength_m": Key("float", REQUIRED, _positive, "vacuum wavelength", True),
    "fiber.n1": Key("float", 0.0, _nonneg, "core index; 0 = fused-silica Sellmeier"),
    "fiber.n2": Key("float", 1.0, _positive, "cladding index"),
    "fiber.ell": Key("int", 1, _positive, "azimuthal mode order"),
    "fiber.branch": Key("int", 1, _positive, "radial mode order"),
    # polarization
    "pol.kind": Key("str", "circular", _pol_kind),
    "pol.sign": Key("int", 1, _pm_one, "circular rotation sense"),
    "pol.phi0_rad": Key("float", 0.0, None, "linear polarization axis", True),
    "pol.mixing": Key("float", 1.0, _unit_interval, "elliptical mixing weight"),
    "pol.relative_phase_rad": Key("float", 0.0, None, "", True),
    # field
    "field.power_w": Key("float", REQUIRED, _nonneg, "input beam power", True),
    # gauge coupling
    "gauge.kappa0_per_m": Key("float", REQUIRED, _positive, "resonant wavenumber", True),
    "gauge.detuning_rad_s": Key("float", REQUIRED, _nonzero, "omega0 - omega", True),
    "gauge.dipole_moment_c_m": Key("float", RB87_D2_DIPOLE_CM, _positive,
                                   "dipole magnitude", True),
    "gauge.dipole_r": Key("float", 0.5773502691896258, None, "direction cosines"),
    "gauge.dipole_phi": Key("float", 0.5773502691896258, None),
    "gauge.dipole_z": Key("float", 0.5773502691896258, None),
    "gauge.file": Key("str", "", None, "precomputed gauge grid (GAU1)"),
    # condensate
    "sim.atoms": Key("float", REQUIRED, _positive),
    "sim.mass_kg": Key("float", REQUIRED, _positive, "", True),
    "sim.a_s_m": Key("float", REQUIRED, None, "scattering length", True),
    "sim.omega_r_rad_s": Key("float", REQUIRED, _positive, "", True),
    "sim.omega_z_rad_s": Key("float", REQUIRED, _positive, "", True),
    "sim.eta_m": Key("float", REQUIRED, _positive, "torus radius", True),
    "sim.dt_s": Key("float", 1e-7, _positive, "real-time step", True),
    "sim.dt_imag_s": Key("float", 0.0, _nonneg,
                         "imaginary-time step; 0 = grid-scaled default", True),
    "sim.steps": Key("int", 0, _nonneg, "real-time steps for `evolve`"),
    "sim.sample_every": Key("int", 100, _positive),
    "sim.imag_tol": Key("float", 1e-8, _positive),
    "sim.imag_max_steps": Key("int", 200000, _positive),
    "sim.half_factor": Key("bool", False, None, "conventional 1/2 trap prefactor"),
    "sim.wall_clearance_m": Key("float", 100e-9, _nonneg, "", True),
    "sim.wall_height_mu": Key("float", 50.0, _positive, "wall height / mu_TF"),
    "sim.seed_ring": Key("bool", False, None, "phase-imprint a ring in the guess"),
    "sim.seed_ring_r_m": Key("float", 0.0, _nonneg, "", True),
    "sim.seed_ring_sign": Key("int", -1, _pm_one),
    "sim.compare_seeded": Key("bool", True, None,
                              "relax seeded and unseeded, keep lower energy"),
    # grid
    "grid.nx": Key("int", REQUIRED, _grid_dim),
    "grid.ny": Key("int", REQUIRED, _grid_dim),
    "grid.nz": Key("int", REQUIRED, _grid_dim),
    "grid.dx_m": Key("float", REQUIRED, _positive, "", True),
    "grid.dy_m": Key("float", 0.0, _nonneg, "0 = dx", True),
    "grid.dz_m": Key("float", 0.0, _nonneg, "0 = dx", True),
    # scissors / tilt
    "tilt.theta0_rad": Key("float", 0.02, None, "", True),
    "tilt.epsilon": Key("float", 0.0, _nonneg, "0 = derived from omegas"),
    "tilt.omega0_rad_s": Key("float", 0.0, _nonneg, "0 = derived", True),
    "scissors.t_final_s": Key("float", 10e-3, _positive, "", True),
    "scissors.sample_every": Key("int", 20, _positive),
    "scissors.n_modes": Key("int", 2, lambda v: v in (1, 2) or "must be 1 or 2"),
    # detection
    "detect.n_phi": Key("int", 64, _positive),
    "detect.isosurface": Key("float", 0.3, _unit_interval),
    # sweep
    "sweep.key": Key("str", "field.power_w", None),
    "sweep.values": Key("floatlist", (), None),
}

#: Keys that must be present in every config file.
REQUIRED_KEYS = sorted(k for k, spec in SCHEMA.items() if spec.default is REQUIRED)


@dataclass
class ConfigIssue:
    kind: str       # UnknownKey | MissingKey | UnitMismatch | RangeError | ParseError
    key: str
    line: int       # 0 when not tied to a line
    message: str

    def __str__(self):
        loc = f" (line {self.line})" if self.line else ""
        return f"{self.kind}: {self.key}{loc}: {self.message}"


class ConfigError(ValueError):
    """Validation failed; ``issues`` lists every problem found."""

    def __init__(self, issues: List[ConfigIssue]):
        self.issues = issues
        super().__init__("\n".join(str(i) for i in issues))


def _parse_value(typ: str, raw: str):
    if typ == "int":
        return int(raw)
    if typ == "float":
        return float(raw)
    if typ == "bool":
        low = raw.strip().lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if typ == "floatlist":
        return tuple(float(tok) for tok in raw.replace(",", " ").split())
    return raw.strip()


def _stem(key: str) -> str:
    # longest suffix first: *_rad_s must not be mistaken for *_s
    for suf in sorted(_UNIT_SUFFIXES, key=len, reverse=True):
        if key.endswith(suf):
            return key[: -len(suf)]
    return key


_STEM_TO_KEY = {}
for _k in SCHEMA:
    _STEM_TO_KEY.setdefault(_stem(_k), _k)


@dataclass
class RunConfig:
    """Validated configuration plus provenance."""

    values: dict
    text: str
    path: str = ""

    @property
    def sha256(self) -> str:
        return config_hash(self.text)

    def provenance(self) -> dict:
        from . import __version__

        return {"schema_version": SCHEMA_VERSION, "config_sha256": self.sha256,
                "code_version": __version__}

    def __getitem__(self, key):
        return self.values[key]

    # --- domain-object builders -------------------------------------
    def fiber_spec(self) -> fiber_mod.FiberSpec:
        n1 = self["fiber.n1"] or None
        return fiber_mod.FiberSpec(radius_a=self["fiber.radius_m"],
                                   wavelength=self["fiber.wavelength_m"],
                                   n1=n1, n2=self["fiber.n2"])

    def polarization(self) -> fiber_mod.PolarizationSpec:
        return fiber_mod.PolarizationSpec(
            kind=self["pol.kind"], sign=self["pol.sign"],
            phi0=self["pol.phi0_rad"], mixing=self["pol.mixing"],
            relative_phase=self["pol.relative_phase_rad"])

    def gauge_spec(self) -> gauge_mod.GaugeFieldSpec:
        d0 = self["gauge.dipole_moment_c_m"]
        direction = np.array([self["gauge.dipole_r"], self["gauge.dipole_phi"],
                              self["gauge.dipole_z"]], dtype=complex)
        nrm = np.linalg.norm(direction)
        if nrm == 0:
            raise ConfigError([ConfigIssue("RangeError", "gauge.dipole_r", 0,
                                           "dipole direction must be nonzero")])
        dip = tuple(d0 * direction / nrm)
        n1 = self.fiber_spec().n1
        return gauge_mod.GaugeFieldSpec(dipole=dip,
                                        detuning_delta=self["gauge.detuning_rad_s"],
                                        kappa0=self["gauge.kappa0_per_m"], n1=n1)

    def grid(self) -> Grid3D:
        dy = self["grid.dy_m"] or self["grid.dx_m"]
        dz = self["grid.dz_m"] or self["grid.dx_m"]
        return Grid3D(self["grid.nx"], self["grid.ny"], self["grid.nz"],
                      dx=self["grid.dx_m"], dy=dy, dz=dz)

    def sim_params(self) -> gpe_mod.SimParams:
        return gpe_mod.SimParams(
            mass=self["sim.mass_kg"], a_s=self["sim.a_s_m"],
            atom_number=self["sim.atoms"], omega_r=self["sim.omega_r_rad_s"],
            omega_z=self["sim.omega_z_rad_s"], eta=self["sim.eta_m"],
            dt=self["sim.dt_s"],
            dt_imag=self["sim.dt_imag_s"] or None,
            half_factor=self["sim.half_factor"])

    def scissors_config(self) -> scissors_mod.ScissorsConfig:
        return scissors_mod.ScissorsConfig(
            omega_r=self["sim.omega_r_rad_s"], omega_z=self["sim.omega_z_rad_s"],
            theta0=self["tilt.theta0_rad"],
            epsilon=self["tilt.epsilon"] or None,
            omega0=self["tilt.omega0_rad_s"] or None,
            t_final=self["scissors.t_final_s"],
            sample_every=self["scissors.sample_every"])


def parse_config(path) -> RunConfig:
    """Parse and validate a config file; raises ConfigError with all issues."""
    with open(path) as fh:
        text = fh.read()
    return parse_config_text(text, path=str(path))


def parse_config_text(text: str, path: str = "<string>") -> RunConfig:
    issues: List[ConfigIssue] = []
    values = {}
    seen_lines = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            issues.append(ConfigIssue("ParseError", line.split()[0], lineno,
                                      "expected 'key = value'"))
            continue
        key, raw = (tok.strip() for tok in line.split("=", 1))
        seen_lines[key] = lineno
        if key not in SCHEMA:
            stem = _stem(key)
            match = _STEM_TO_KEY.get(stem)
            if match and match != key:
                issues.append(ConfigIssue(
                    "UnitMismatch", key, lineno,
                    f"wrong or missing unit suffix; expected {match}"))
            else:
                issues.append(ConfigIssue("UnknownKey", key, lineno,
                                          "not a recognized key"))
            continue
        spec = SCHEMA[key]
        try:
            values[key] = _parse_value(spec.typ, raw)
        except ValueError as exc:
            issues.append(ConfigIssue("ParseError", key, lineno, str(exc)))
    for key, spec in SCHEMA.items():
        if key in values:
            if spec.check is not None:
                verdict = spec.check(values[key])
                if verdict is not True:
                    issues.append(ConfigIssue("RangeError", key,
                                              seen_lines.get(key, 0), str(verdict)))
        elif spec.default is REQUIRED:
            issues.append(ConfigIssue("MissingKey", key, 0, "required key absent"))
        else:
            values[key] = spec.default
    if issues:
        raise ConfigError(issues)
    return RunConfig(values=values, text=text, path=path)


__all__ = [
    "SCHEMA",
    "SCHEMA_VERSION",
    "REQUIRED",
    "REQUIRED_KEYS",
    "Key",
    "ConfigIssue",
    "ConfigError",
    "RunConfig",
    "parse_config",
    "parse_config_text",
]

"""Spectral split-step solver for the 3D Gross-Pitaevskii equation.

The Hamiltonian is

    H = (p - m A)^2 / 2m + V_ext + g |psi|^2,

with a transverse gauge potential A = A_z(x, y) zhat (velocity units).
Because A_z does not depend on z it commutes with p_z, so the kinetic
term splits exactly into three pieces that are each diagonal somewhere:

    p^2/2m          -> full k space,
    -A_z p_z        -> mixed (x, y, k_z) representation,
    m A_z^2 / 2     -> position space (absorbed into the potential).

One second-order Strang step is V/2, G/2, T, G/2, V/2 with the
nonlinear density refreshed for the trailing half, which keeps the real
time map exactly time reversible up to FFT roundoff. Imaginary time uses
the same factorization with real decay factors and per-step
renormalization to the target atom number.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.fft as sfft

from .constants import HBAR
from .gauge import GaugeGrid
from .grids import Grid3D, Wavefunction

# FFT worker threads; FIBERVORTEX_THREADS is the only environment knob
_WORKERS = int(os.environ.get("FIBERVORTEX_THREADS", os.cpu_count() or 1))


class TorusOutsideGrid(ValueError):
    """Torus radius does not fit inside the grid extent."""


class GaugeNotTransverse(ValueError):
    """Gauge potential has a z dependence or in-plane components."""


class NoConvergence(RuntimeError):
    """Imaginary time failed to converge within max_steps."""


class NaNDetected(RuntimeError):
    """Non-finite values appeared in the field; carries a diagnostic dict."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CFLWarning(UserWarning):
    """Phase advance per step exceeds 0.1 rad; dt is likely too large."""


@dataclass(frozen=True)
class SimParams:
    """Atom and trap parameters of a run.

    ``omega_r``/``omega_z`` are angular frequencies in rad/s. The trap is
    evaluated literally as m (w_r^2 (r-eta)^2 + w_z^2 z^2); set
    ``half_factor`` to restore the conventional 1/2 prefactor.
    """

    mass: float
    a_s: float
    atom_number: float
    omega_r: float
    omega_z: float
    eta: float
    dt: float = 1e-7
    dt_imag: Optional[float] = None
    half_factor: bool = False

    def __post_init__(self):
        if self.atom_number <= 0:
            raise ValueError("atom_number must be positive")
        if self.mass <= 0 or self.dt <= 0:
            raise ValueError("mass and dt must be positive")

    @property
    def g(self) -> float:
        """Interaction strength 4 pi hbar^2 a_s / m (J m^3)."""
        return 4.0 * np.pi * HBAR**2 * self.a_s / self.mass

    @property
    def trap_prefactor(self) -> float:
        return 0.5 if self.half_factor else 1.0


def default_dt_imag(grid: Grid3D) -> float:
    """Imaginary-time step 1e-6 s * (50 nm / dx)^2, scaled with the grid."""
    return 1e-6 * (50e-9 / min(grid.dx, grid.dy, grid.dz)) ** 2


def toroidal_trap(params: SimParams, grid: Grid3D) -> np.ndarray:
    """Toroidal trap m (w_r^2 (r - eta)^2 + w_z^2 z^2); zero on the ring r = eta."""
    extent = min(np.abs(grid.x).max(), np.abs(grid.y).max())
    if not (0 < params.eta < extent):
        raise TorusOutsideGrid(
            f"eta = {params.eta:.3g} m outside grid half-extent {extent:.3g} m"
        )
    pref = params.mass * params.trap_prefactor
    v = pref * (params.omega_r**2 * (grid.rho - params.eta) ** 2
                + params.omega_z**2 * grid.zb**2)
    return np.broadcast_to(v, grid.shape).copy()


def thomas_fermi_mu(params: SimParams) -> float:
    """Large-torus Thomas-Fermi chemical potential of the toroidal trap."""
    mu2 = (params.atom_number * params.g * params.mass
           * params.omega_r * params.omega_z / (np.pi**2 * params.eta))
    if params.half_factor:
        mu2 /= 2.0
    return float(np.sqrt(mu2))


def add_fiber_wall(v: np.ndarray, grid: Grid3D, params: SimParams,
                   fiber_radius: float, clearance: float = 100e-9,
                   height: Optional[float] = None) -> np.ndarray:
    """Hard repulsive wall standing in for the fiber body.

    Raises the potential by ``height`` (default 50x the Thomas-Fermi mu)
    for r < fiber_radius + clearance. Returns a new array.
    """
    if height is None:
        height = 50.0 * thomas_fermi_mu(params)
    core = np.broadcast_to(grid.rho < fiber_radius + clearance, grid.shape)
    return v + np.where(core, height, 0.0)


def tf_initial_state(params: SimParams, grid: Grid3D, v_ext: np.ndarray,
                     mu: Optional[float] = None) -> Wavefunction:
    """Thomas-Fermi profile sqrt(max(mu - V, 0)/g), normalized to N.

    For vanishing interactions (or an empty TF region) falls back to a
    Boltzmann-like envelope exp(-(V - Vmin)/scale) with the trap quantum
    as the energy scale.
    """
    if mu is None:
        mu = thomas_fermi_mu(params) if params.g > 0 else 0.0
    if params.g > 0:
        dens = np.maximum(mu - v_ext, 0.0) / params.g
    else:
        dens = np.zeros(grid.shape)
    if dens.max() == 0.0:
        scale = max(mu, HBAR * np.sqrt(params.omega_r * params.omega_z))
        dens = np.exp(-(v_ext - v_ext.min()) / scale)
    return Wavefunction(np.sqrt(dens).astype(np.complex128), grid).normalize(
        params.atom_number
    )


def ring_imprint(wf: Wavefunction, r_ring: float, z_ring: float = 0.0,
                 sign: int = 1) -> Wavefunction:
    """Imprint a poloidal 2*pi phase winding around the circle r = r_ring.

    Seeds a vortex ring encircling the fiber; imaginary time relaxes the
    density core. Operates in place and returns the wavefunction.
    """
    grid = wf.grid
    theta = np.arctan2(grid.zb, grid.rho - r_ring)
    wf.psi *= np.exp(1j * sign * theta)
    return wf


def absorbing_mask(grid: Grid3D, width: int = 8) -> np.ndarray:
    """cos^2 ramp to zero over the outer ``width`` cells of every axis."""
    def ramp(n):
        m = np.ones(n)
        edge = 0.5 * (1.0 + np.cos(np.linspace(0, np.pi, width)))
        m[:width] = edge[::-1]
        m[n - width:] = edge
        return m

    return (ramp(grid.nx)[:, None, None] * ramp(grid.ny)[None, :, None]
            * ramp(grid.nz)[None, None, :])


class SplitStepOperators:
    """Split Hamiltonian pieces bound to a grid, trap, and gauge field.

    ``v_trap`` is the full external potential (trap + wall + any tilt).
    ``gauge`` may be a :class:`~fibervortex.gauge.GaugeGrid` (momentum
    units; converted to velocity here, the single conversion point), a
    raw (nx, ny) array already in velocity units, or None.
    """

    def __init__(self, params: SimParams, grid: Grid3D, v_trap: np.ndarray,
                 gauge=None):
        if v_trap.shape != grid.shape:
            raise ValueError("potential shape mismatch")
        if not np.isfinite(v_trap).all():
            raise ValueError("potential must be finite")
        self.params = params
        self.grid = grid
        self.v_trap = np.asarray(v_trap, dtype=float)
        self.a_z = self._ingest_gauge(gauge)
        self.kinetic = HBAR**2 * grid.k_squared() / (2.0 * params.mass)
        if self.a_z is not None:
            self.v_quad = 0.5 * params.mass * self.a_z[:, :, None] ** 2
            self.gauge_mixed = -self.a_z[:, :, None] * (HBAR * grid.kz[None, None, :])
        else:
            self.v_quad = None
            self.gauge_mixed = None
        self._props = {}

    def _ingest_gauge(self, gauge):
        if gauge is None:
            return None
        if isinstance(gauge, GaugeGrid):
            a = gauge.a_z / self.params.mass
        else:
            a = np.asarray(gauge, dtype=float)
        if a.ndim == 3:
            if not np.allclose(a, a[:, :, :1], rtol=0, atol=0):
                raise GaugeNotTransverse("A_z must not depend on z")
            a = a[:, :, 0]
        if a.shape != (self.grid.nx, self.grid.ny):
            raise GaugeNotTransverse(
                f"A_z shape {a.shape} != transverse grid {(self.grid.nx, self.grid.ny)}"
            )
        return a

    @property
    def v_static(self) -> np.ndarray:
        """External potential plus the quadratic gauge term m A_z^2/2."""
        if self.v_quad is None:
            return self.v_trap
        return self.v_trap + self.v_quad

    def propagators(self, dt: float, imag: bool):
        key = (float(dt), bool(imag))
        if key not in self._props:
            if imag:
                exp_v_half = np.exp(-self.v_static * (dt / (2.0 * HBAR)))
                exp_t = np.exp(-self.kinetic * (dt / HBAR))
                exp_g_half = (None if self.gauge_mixed is None
                              else np.exp(-self.gauge_mixed * (dt / (2.0 * HBAR))))
            else:
                exp_v_half = np.exp(self.v_static * (-1j * dt / (2.0 * HBAR)))
                exp_t = np.exp(self.kinetic * (-1j * dt / HBAR))
                exp_g_half = (None if self.gauge_mixed is None
                              else np.exp(self.gauge_mixed * (-1j * dt / (2.0 * HBAR))))
            self._props[key] = (exp_v_half, exp_t, exp_g_half)
        return self._props[key]

    def step(self, psi: np.ndarray, dt: float, imag: bool) -> np.ndarray:
        """One Strang step V/2, G/2, T, G/2, V/2 (in place where possible)."""
        exp_v_half, exp_t, exp_g_half = self.propagators(dt, imag)
        g_fac = self.params.g * dt / (2.0 * HBAR)
        if imag:
            psi *= exp_v_half * np.exp(-g_fac * np.abs(psi) ** 2)
        else:
            psi *= exp_v_half * np.exp(-1j * g_fac * np.abs(psi) ** 2)
        psi = sfft.fft(psi, axis=2, workers=_WORKERS)
        if exp_g_half is not None:
            psi *= exp_g_half
        psi = sfft.fft2(psi, axes=(0, 1), workers=_WORKERS)
        psi *= exp_t
        psi = sfft.ifft2(psi, axes=(0, 1), workers=_WORKERS)
        if exp_g_half is not None:
            psi *= exp_g_half
        psi = sfft.ifft(psi, axis=2, workers=_WORKERS)
        if imag:
            psi *= exp_v_half * np.exp(-g_fac * np.abs(psi) ** 2)
        else:
            psi *= exp_v_half * np.exp(-1j * g_fac * np.abs(psi) ** 2)
        return psi


# name the constructor after its role as well
def build_hamiltonian_terms(params: SimParams, grid: Grid3D, v_ext: np.ndarray,
                            gauge=None) -> SplitStepOperators:
    """Assemble the split operator set {T_k, V_x, G_mixed} for stepping."""
    return SplitStepOperators(params, grid, v_ext, gauge)


def _check_finite(psi, step, context):
    if not np.isfinite(psi.view(float)).all():
        raise NaNDetected(
            f"non-finite field during {context} at step {step}",
            diagnostics={"step": step, "max_abs": float(np.nanmax(np.abs(psi)))},
        )


def imaginary_time_ground_state(params: SimParams, grid: Grid3D,
                                terms: SplitStepOperators, tol: float = 1e-8,
                                max_steps: int = 200000,
                                psi0: Optional[Wavefunction] = None,
                                dt_imag: Optional[float] = None,
                                min_steps: int = 20,
                                callback: Optional[Callable] = None,
                                callback_every: int = 0):
    """Relax to the ground state by normalized imaginary-time evolution.

    Converged when the per-step chemical-potential estimate (from the norm
    decay rate) changes by less than ``tol`` relatively between steps.
    Returns (Wavefunction, info) where info carries mu, the step count and
    the time step used.
    """
    dt = dt_imag if dt_imag is not None else (
        params.dt_imag if params.dt_imag is not None else default_dt_imag(grid)
    )
    if psi0 is None:
        wf = tf_initial_state(params, grid, terms.v_trap)
    else:
        wf = psi0.copy()
        wf.normalize(params.atom_number)
    psi = wf.psi
    n_target = params.atom_number
    mu_prev = None
    mu = np.nan
    for step in range(1, max_steps + 1):
        psi = terms.step(psi, dt, imag=True)
        nrm2 = float(np.sum(np.abs(psi) ** 2).real * grid.dvol)
        if not np.isfinite(nrm2) or nrm2 <= 0.0:
            _check_finite(psi, step, "imaginary time")
            raise NaNDetected("norm collapsed in imaginary time",
                              {"step": step, "norm": nrm2})
        mu = -HBAR * np.log(nrm2 / n_target) / (2.0 * dt)
        psi *= np.sqrt(n_target / nrm2)
        if callback is not None and callback_every and step % callback_every == 0:
            callback(step, Wavefunction(psi, grid), mu)
        if (mu_prev is not None and step >= min_steps
                and abs(mu - mu_prev) < tol * abs(mu)):
            out = Wavefunction(psi, grid)
            return out, {"mu": float(mu), "steps": step, "dt_imag": dt,
                         "converged": True}
        mu_prev = mu
    raise NoConvergence(
        f"imaginary time not converged after {max_steps} steps (mu = {mu:.6e})"
    )


def imaginary_time_relax(params: SimParams, grid: Grid3D,
                         terms: SplitStepOperators, psi0: Wavefunction,
                         n_steps: int,
                         dt_imag: Optional[float] = None) -> Wavefunction:
    """Fixed number of normalized imaginary-time steps (no convergence gate).

    Used to smooth a phase-imprinted state into a clean core profile
    without giving a metastable structure time to escape its basin.
    """
    dt = dt_imag if dt_imag is not None else (
        params.dt_imag if params.dt_imag is not None else default_dt_imag(grid)
    )
    psi = psi0.psi.copy()
    n_target = params.atom_number
    for step in range(1, n_steps + 1):
        psi = terms.step(psi, dt, imag=True)
        nrm2 = float(np.sum(np.abs(psi) ** 2).real * grid.dvol)
        if not np.isfinite(nrm2) or nrm2 <= 0.0:
            _check_finite(psi, step, "imaginary-time relax")
            raise NaNDetected("norm collapsed during relax", {"step": step})
        psi *= np.sqrt(n_target / nrm2)
    return Wavefunction(psi, grid)


def real_time_evolve(params: SimParams, grid: Grid3D, terms: SplitStepOperators,
                     psi0: Wavefunction, t_final: float,
                     sample_every: int = 100, dt: Optional[float] = None,
                     observer: Optional[Callable] = None,
                     mask: Optional[np.ndarray] = None,
                     check_every: int = 50):
    """Propagate in real time, sampling observables every ``sample_every`` steps.

    Returns (Wavefunction, rows) where rows is a list of observable dicts
    with 'step' and 't' added. ``observer(step, wf)`` runs at the sampling
    cadence; an optional absorbing ``mask`` multiplies the field each step
    (off by default, since it breaks unitarity).
    """
    dt = dt if dt is not None else params.dt
    n_steps = int(round(t_final / dt))
    # rate check over the populated region (99.9%-density cells); the
    # fiber wall and the cloud's evanescent tail into it hold no atoms and
    # their (exactly applied) phase advance is irrelevant
    dens0 = psi0.density()
    support = dens0 > 1e-3 * dens0.max()
    v_eff = np.abs(terms.v_static[support]) + params.g * dens0[support]
    v_scale = float(v_eff.max()) if v_eff.size else float(np.abs(terms.v_static).max())
    if dt * v_scale / HBAR > 0.1:
        warnings.warn(
            f"dt*max|V|/hbar = {dt * v_scale / HBAR:.3f} rad/step exceeds 0.1",
            CFLWarning,
        )
    psi = psi0.psi.copy()
    rows = []

    def sample(step):
        wf = Wavefunction(psi, grid)
        row = observables(wf, params, terms)
        row["step"] = step
        row["t"] = step * dt
        rows.append(row)
        if observer is not None:
            observer(step, wf)

    for step in range(n_steps):
        if step % sample_every == 0:
            sample(step)
        psi = terms.step(psi, dt, imag=False)
        if mask is not None:
            psi *= mask
        if step % check_every == 0:
            _check_finite(psi, step, "real time")
    sample(n_steps)
    return Wavefunction(psi, grid), rows


def _spectral_derivative(psi, k, axis):
    f = sfft.fft(psi, axis=axis, workers=_WORKERS)
    shape = [1, 1, 1]
    shape[axis] = -1
    f *= 1j * k.reshape(shape)
    return sfft.ifft(f, axis=axis, workers=_WORKERS)


def observables(wf: Wavefunction, params: SimParams,
                terms: SplitStepOperators) -> dict:
    """Norm, energy decomposition, mu, and the poloidal moments.

    The poloidal angular momentum per particle is
    <l_z>_pol = (1/N) < -i hbar [(r - eta) d_z - z d_r] >, the generator
    of rotations in the (r - eta, z) half-plane, evaluated with spectral
    derivatives. The condensate-axis angle is the quadrupole form
    0.5 atan2(2<r'z>, <r'^2 - z^2>).
    """
    grid = wf.grid
    psi = wf.psi
    dvol = grid.dvol
    dens = np.abs(psi) ** 2
    norm = float(dens.sum() * dvol)
    npts = psi.size

    psik = sfft.fftn(psi, workers=_WORKERS)
    e_kin = float(np.sum(terms.kinetic * np.abs(psik) ** 2) * dvol / npts)

    dz_psi = _spectral_derivative(psi, grid.kz, axis=2)
    if terms.a_z is not None:
        cross = -HBAR * terms.a_z[:, :, None] * np.imag(np.conj(psi) * dz_psi)
        e_cross = float(cross.sum() * dvol)
        e_quad = float((terms.v_quad * dens).sum() * dvol)
    else:
        e_cross = 0.0
        e_quad = 0.0
    e_trap = float((terms.v_trap * dens).sum() * dvol)
    int_full = params.g * float((dens**2).sum() * dvol)
    e_int = 0.5 * int_full
    e_total = e_kin + e_cross + e_quad + e_trap + e_int
    mu = (e_kin + e_cross + e_quad + e_trap + int_full) / norm

    rho = grid.rho
    rp = rho - params.eta
    dx_psi = _spectral_derivative(psi, grid.kx, axis=0)
    dy_psi = _spectral_derivative(psi, grid.ky, axis=1)
    rho_safe = np.maximum(rho, 1e-3 * grid.dx)
    dr_psi = (grid.xb * dx_psi + grid.yb * dy_psi) / rho_safe
    lz_dens = HBAR * np.imag(np.conj(psi) * (rp * dz_psi - grid.zb * dr_psi))
    lz_pol = float(lz_dens.sum() * dvol / norm)

    r2z2 = float(((rp**2 + grid.zb**2) * dens).sum() * dvol / norm)
    rz = float(((rp * grid.zb) * dens).sum() * dvol / norm)
    r2mz2 = float(((rp**2 - grid.zb**2) * dens).sum() * dvol / norm)
    angle = 0.5 * np.arctan2(2.0 * rz, r2mz2)
    # central-moment variant: measured about the cloud's own centroid, so
    # dipole (center-of-mass) motion cannot masquerade as a tilt
    r_c = float((rp * dens).sum() * dvol / norm)
    z_c = float((grid.zb * dens).sum() * dvol / norm)
    rz_c = rz - r_c * z_c
    r2mz2_c = r2mz2 - r_c**2 + z_c**2
    angle_c = 0.5 * np.arctan2(2.0 * rz_c, r2mz2_c)

    return {
        "norm": norm,
        "E_total": e_total,
        "E_kin": e_kin,
        "E_gauge_cross": e_cross,
        "E_gauge_quad": e_quad,
        "E_gauge": e_cross + e_quad,
        "E_trap": e_trap,
        "E_int": e_int,
        "mu": mu,
        "lz_pol": lz_pol,
        "r2z2": r2z2,
        "rz": rz,
        "angle": angle,
        "rz_central": rz_c,
        "angle_central": angle_c,
    }


__all__ = [
    "SimParams",
    "SplitStepOperators",
    "TorusOutsideGrid",
    "GaugeNotTransverse",
    "NoConvergence",
    "NaNDetected",
    "CFLWarning",
    "default_dt_imag",
    "toroidal_trap",
    "thomas_fermi_mu",
    "add_fiber_wall",
    "tf_initial_state",
    "ring_imprint",
    "absorbing_mask",
    "build_hamiltonian_terms",
    "imaginary_time_ground_state",
    "imaginary_time_relax",
    "real_time_evolve",
    "observables",
]

"""Scissors-mode excitation and frequency analysis in the elliptic torus.

The protocol: prepare the ground state in an untilted elliptic-toroidal
trap (omega_z < omega_r), switch on a small rz tilt

    V -> V_trap - m omega0^2 alpha (r - eta) z,     alpha = 2 eps theta0,

and record the condensate-axis angle while the cloud rocks in the
poloidal plane. Without circulation the oscillation carries the single
frequency sqrt(omega_r^2 + omega_z^2); a vortex ring splits it into a
pair (omega-, omega+) whose separation measures the poloidal angular
momentum, omega+ - omega- = <l_z> / (m <r^2 + z^2>).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .gpe import SimParams, SplitStepOperators, real_time_evolve
from .grids import Grid3D, Wavefunction


class TiltTooLarge(ValueError):
    """Tilted potential loses confinement at the grid edge."""


class FitRejected(RuntimeError):
    """Frequency fit failed its residual or resolvability gate."""


@dataclass(frozen=True)
class ScissorsConfig:
    """Protocol parameters.

    ``epsilon`` defaults to the trap deformation
    (w_r^2 - w_z^2)/(w_r^2 + w_z^2) and ``omega0`` to the mean curvature
    sqrt((w_r^2 + w_z^2)/2), the standard scissors conventions.
    """

    omega_r: float
    omega_z: float
    theta0: float = 0.02
    epsilon: Optional[float] = None
    omega0: Optional[float] = None
    t_final: float = 10e-3
    sample_every: int = 20
    theta0_cap: float = 0.05

    def __post_init__(self):
        if not (self.omega_z < self.omega_r):
            raise ValueError("scissors mode needs omega_z < omega_r")
        if abs(self.theta0) > self.theta0_cap:
            raise ValueError(
                f"theta0 = {self.theta0} exceeds the small-angle cap {self.theta0_cap}"
            )

    @property
    def eps(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return (self.omega_r**2 - self.omega_z**2) / (self.omega_r**2 + self.omega_z**2)

    @property
    def om0(self) -> float:
        if self.omega0 is not None:
            return self.omega0
        return float(np.sqrt(0.5 * (self.omega_r**2 + self.omega_z**2)))

    @property
    def alpha(self) -> float:
        return 2.0 * self.eps * self.theta0


def predicted_scissors(cfg: ScissorsConfig) -> float:
    """Vortex-free scissors frequency sqrt(w_r^2 + w_z^2)."""
    return float(np.hypot(cfg.omega_r, cfg.omega_z))


def predicted_splitting(lz_per_particle: float, r2z2: float, mass: float) -> float:
    """Frequency splitting <l_z> / (m <r^2 + z^2>) of the vortex-carrying mode."""
    if r2z2 <= 0:
        raise ValueError("r2z2 must be positive")
    return lz_per_particle / (mass * r2z2)


def tilt_potential(base: np.ndarray, cfg: ScissorsConfig, params: SimParams,
                   grid: Grid3D) -> np.ndarray:
    """Add the rz tilt -m omega0^2 alpha (r - eta) z to a base potential.

    The tilt couples to the poloidal coordinate r - eta, so every radial
    slice of the torus is rocked like a 2D elliptic trap. Returns base
    unchanged when alpha = 0.
    """
    if cfg.alpha == 0.0:
        return base
    rp = grid.rho - params.eta
    v = base - params.mass * cfg.om0**2 * cfg.alpha * rp * grid.zb
    # confinement check: the tilted minimum must stay off the box boundary
    shell = np.ones(grid.shape, dtype=bool)
    shell[1:-1, 1:-1, 1:-1] = False
    if v[shell].min() <= v.min():
        raise TiltTooLarge("tilted potential minimum sits on the grid boundary")
    return v


@dataclass
class OscillationRecord:
    """Sampled scissors-mode trace."""

    times: np.ndarray
    angle: np.ndarray
    moment_rz: np.ndarray
    lz_pol: np.ndarray
    r2z2: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        for arr in (self.angle, self.moment_rz, self.lz_pol, self.r2z2):
            if len(arr) != n:
                raise ValueError("record arrays must share one length")

    @property
    def sample_dt(self) -> float:
        return float(self.times[1] - self.times[0])


def run_protocol(ground: Wavefunction, cfg: ScissorsConfig, params: SimParams,
                 grid: Grid3D, base_potential: np.ndarray, gauge=None,
                 dt: Optional[float] = None) -> OscillationRecord:
    """Evolve the prepared ground state under the tilted trap and record.

    The ground state should come from the untilted potential (with or
    without a gauge field / ring); the tilt switches on at t = 0. The
    quadrupole angle is pi-periodic, and a z-elongated cloud
    (omega_z < omega_r) rests at +-pi/2 where the principal branch flips
    sign; the recorded trace is unwrapped with period pi so it stays
    continuous. The axis angle is measured about the cloud's own centroid
    (central quadrupole moments), so center-of-mass sloshing excited
    alongside the scissors mode cannot leak into the trace.
    """
    v_tilt = tilt_potential(base_potential, cfg, params, grid)
    terms = SplitStepOperators(params, grid, v_tilt, gauge=gauge)
    _, rows = real_time_evolve(params, grid, terms, ground, cfg.t_final,
                               sample_every=cfg.sample_every, dt=dt)
    angle = np.unwrap(2.0 * np.array([r["angle_central"] for r in rows])) / 2.0
    return OscillationRecord(
        times=np.array([r["t"] for r in rows]),
        angle=angle,
        moment_rz=np.array([r["rz_central"] for r in rows]),
        lz_pol=np.array([r["lz_pol"] for r in rows]),
        r2z2=np.array([r["r2z2"] for r in rows]),
    )


@dataclass
class FrequencyFit:
    """Fitted oscillation model; omegas in rad/s."""

    model: str                      # "single_mode" | "two_mode"
    omegas: tuple
    amplitudes: tuple
    phases: tuple
    offset: float
    damping: float
    residual: float                 # rms residual / rms signal

    @property
    def omega(self) -> float:
        return self.omegas[0]

    @property
    def omega_minus(self) -> float:
        return min(self.omegas)

    @property
    def omega_plus(self) -> float:
        return max(self.omegas)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.omega_plus + self.omega_minus)

    @property
    def splitting(self) -> float:
        return self.omega_plus - self.omega_minus


def _spectrum_peaks(signal: np.ndarray, dt: float, n_peaks: int):
    """Initial frequency guesses from the windowed FFT, floor-gated."""
    y = signal - signal.mean()
    win = np.hanning(len(y))
    spec = np.abs(np.fft.rfft(y * win))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(len(y), d=dt)
    floor = 3.0 * np.median(spec[1:])
    order = np.argsort(spec[1:])[::-1] + 1
    peaks = []
    for i in order:
        if spec[i] < floor and peaks:
            break
        if any(abs(freqs[i] - p) < 2.0 * (freqs[1] - freqs[0]) for p in peaks):
            continue
        peaks.append(float(freqs[i]))
        if len(peaks) == n_peaks:
            break
    while len(peaks) < n_peaks:
        peaks.append(peaks[-1] * 1.3 if peaks else freqs[len(freqs) // 4])
    return peaks


def fit_frequencies(rec: OscillationRecord, n_modes: int = 1,
                    signal: Optional[np.ndarray] = None,
                    max_residual: float = 0.10) -> FrequencyFit:
    """Least-squares fit of 1 or 2 damped sinusoids to the angle trace.

    Initialized from the two largest windowed-FFT peaks above three times
    the median spectral floor. Raises :class:`FitRejected` when the
    relative rms residual exceeds ``max_residual`` or, for n_modes = 2,
    when the fitted pair is closer than two FFT bins (unresolved).
    """
    if n_modes not in (1, 2):
        raise ValueError("n_modes must be 1 or 2")
    y = np.asarray(rec.angle if signal is None else signal, dtype=float)
    t = rec.times
    dt = rec.sample_dt
    t_span = t[-1] - t[0]
    bin_width = 2.0 * np.pi / t_span
    band = (bin_width, np.pi / dt)
    y_rms = float(np.sqrt(np.mean((y - y.mean()) ** 2)))
    if y_rms == 0.0:
        raise FitRejected("signal has no oscillating component")
    amp0 = np.sqrt(2.0) * y_rms
    peaks = _spectrum_peaks(y, dt, n_modes)

    if n_modes == 1:
        p0 = [y.mean(), amp0, 0.0, 0.0, peaks[0]]

        def model(p):
            off, a, ph, gam, om = p
            return off + a * np.exp(-np.abs(gam) * t) * np.cos(om * t + ph)

        lo = [-np.inf, 0.0, -2 * np.pi, 0.0, band[0]]
        hi = [np.inf, np.inf, 2 * np.pi, np.inf, band[1]]
    else:
        om_a, om_b = sorted(peaks[:2])
        p0 = [y.mean(), 0.5 * amp0, 0.0, 0.5 * amp0, 0.0, 0.0, om_a, om_b]

        def model(p):
            off, a1, ph1, a2, ph2, gam, om1, om2 = p
            env = np.exp(-np.abs(gam) * t)
            return (off + a1 * env * np.cos(om1 * t + ph1)
                    + a2 * env * np.cos(om2 * t + ph2))

        lo = [-np.inf, 0.0, -2 * np.pi, 0.0, -2 * np.pi, 0.0, band[0], band[0]]
        hi = [np.inf, np.inf, 2 * np.pi, np.inf, 2 * np.pi, np.inf, band[1], band[1]]

    sol = least_squares(lambda p: model(p) - y, p0, bounds=(lo, hi),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=20000)
    resid = float(np.sqrt(np.mean(sol.fun**2)) / y_rms)
    if n_modes == 1:
        off, a, ph, gam, om = sol.x
        fit = FrequencyFit("single_mode", (float(om),), (float(a),),
                           (float(ph),), float(off), float(abs(gam)), resid)
    else:
        off, a1, ph1, a2, ph2, gam, om1, om2 = sol.x
        fit = FrequencyFit("two_mode", (float(om1), float(om2)),
                           (float(a1), float(a2)), (float(ph1), float(ph2)),
                           float(off), float(abs(gam)), resid)
        if abs(om2 - om1) < 2.0 * bin_width:
            raise FitRejected(
                f"modes unresolved: |w+ - w-| = {abs(om2 - om1):.3g} rad/s "
                f"< 2 FFT bins = {2 * bin_width:.3g} rad/s (residual {resid:.3g})"
            )
    if resid > max_residual:
        raise FitRejected(f"relative rms residual {resid:.3g} exceeds {max_residual}")
    return fit


__all__ = [
    "ScissorsConfig",
    "OscillationRecord",
    "FrequencyFit",
    "TiltTooLarge",
    "FitRejected",
    "predicted_scissors",
    "predicted_splitting",
    "tilt_potential",
    "run_protocol",
    "fit_frequencies",
]

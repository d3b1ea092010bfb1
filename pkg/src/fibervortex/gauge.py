"""Artificial gauge fields for two-level atoms in an evanescent field.

A dressed two-level atom in a field detuned by Delta experiences a
geometric vector potential along the fiber axis,

    A_z = hbar * kappa0 * (n1 + 1) * s * x / (1 + s^2 x),

where s = |d.E|_peak / (hbar |Delta|) is the saturation parameter at the
intensity maximum and x(r, phi) = |d.E|^2 / |d.E|^2_peak is the
dimensionless coupling profile, so that s^2 x is the local saturation
squared. A_z is stored in momentum units (kg m/s); divide by the atomic
mass at GPE ingestion to get the velocity-dimension potential entering
(p - m A)^2 / 2m.

The synthetic magnetic field has only in-plane components; we store it in
the printed orientation (the negative curl of A_z zhat),

    B_phi = +dA_z/dr,      B_r = -(1/r) dA_z/dphi,

an overall sign that never reaches the condensate dynamics (only A_z
enters the Hamiltonian). B is computed two independent ways: "analytic"
(chain rule on the saturation bracket with high-order stencilled
derivatives of the coupling profile on an oversampled polar grid) and
"numeric" (plain second-order differences of the sampled A_z). The two
paths act as mutual oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import map_coordinates

from .constants import HBAR
from .fiber import EvanescentField, evaluate_field

#: Region [a + this, ...] is excluded when comparing B paths near the surface.
SURFACE_SKIN_M = 50e-9


class ZeroDetuning(ValueError):
    """The dressed-state formulas need a nonzero detuning."""


class GridTooCoarse(RuntimeError):
    """Numeric curl is unresolved on the supplied grid spacing."""


@dataclass(frozen=True)
class GaugeFieldSpec:
    """Atomic side of the gauge coupling.

    Parameters
    ----------
    dipole : tuple of complex
        Dipole components (d_r, d_phi, d_z) in C*m.
    detuning_delta : float
        Delta = omega0 - omega in rad/s; must be nonzero.
    kappa0 : float
        Resonant wavenumber omega0/c in 1/m.
    n1 : float
        Fiber core index entering the (n1 + 1) prefactor.
    """

    dipole: tuple
    detuning_delta: float
    kappa0: float
    n1: float

    def __post_init__(self):
        if self.detuning_delta == 0.0:
            raise ZeroDetuning("detuning_delta must be nonzero")
        if np.linalg.norm(np.asarray(self.dipole, dtype=complex)) == 0.0:
            raise ValueError("dipole must have nonzero magnitude")

    @property
    def prefactor(self) -> float:
        """hbar * kappa0 * (n1 + 1), the momentum scale of A_z."""
        return HBAR * self.kappa0 * (self.n1 + 1.0)


def coupling(spec: GaugeFieldSpec, e_r, e_phi, e_z):
    """Complex dipole coupling d_r E_r + d_phi E_phi + d_z E_z (units J)."""
    d_r, d_phi, d_z = spec.dipole
    return d_r * e_r + d_phi * e_phi + d_z * e_z


def saturation(spec: GaugeFieldSpec, e_field) -> np.ndarray:
    """Saturation parameter s = |d.E| / (hbar |Delta|) for field vector(s).

    ``e_field`` is a 3-tuple (E_r, E_phi, E_z) of scalars or arrays.
    Linear in |E| and inversely proportional to |Delta|.
    """
    cpl = np.abs(coupling(spec, *e_field))
    return cpl / (HBAR * abs(spec.detuning_delta))


def vector_potential(spec: GaugeFieldSpec, e_field, peak_coupling: Optional[float] = None):
    """Gauge potential A_z in momentum units for field vector(s).

    ``peak_coupling`` is |d.E| at the profile maximum, which fixes the
    saturation parameter; by default the maximum over the supplied values
    is used (a single point is then treated as the peak). With
    x = |d.E|^2/peak^2 the result is prefactor * s * x / (1 + s^2 x):
    zero at zero field, quadratic in |E| for weak fields at fixed s, and
    saturating towards prefactor / s as s^2 x grows.
    """
    cpl = np.abs(coupling(spec, *e_field))
    if peak_coupling is None:
        peak_coupling = float(np.max(cpl))
    if peak_coupling == 0.0:
        return np.zeros_like(cpl)
    s = peak_coupling / (HBAR * abs(spec.detuning_delta))
    x = (cpl / peak_coupling) ** 2
    return spec.prefactor * s * x / (1.0 + s**2 * x)


@dataclass
class GaugeGrid:
    """Gauge potential and synthetic magnetic field on an (x, y) grid.

    ``a_z`` is in momentum units; ``b_r``/``b_phi`` are its curl components
    (momentum per metre). ``s_tilde`` is the saturation parameter at the
    coupling-profile peak; ``peak_coupling`` the corresponding |d.E|.
    """

    x: np.ndarray
    y: np.ndarray
    a_z: np.ndarray
    b_r: np.ndarray
    b_phi: np.ndarray
    s_tilde: float
    peak_coupling: float
    meta: dict

    @property
    def spacing(self):
        return float(self.x[1] - self.x[0]), float(self.y[1] - self.y[0])


def _coupling_profile_polar(gspec: GaugeFieldSpec, ev: EvanescentField,
                            r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """|d.E|^2 on the tensor polar grid r (*) phi from the field closures."""
    e = evaluate_field(ev.mode, ev.spec, ev.pol, r[:, None], phi[None, :],
                       amplitude=ev.amplitude)
    return np.abs(coupling(gspec, *e)) ** 2


def _d4(f: np.ndarray, h: float, axis: int, periodic: bool) -> np.ndarray:
    """Fourth-order central first derivative along axis."""
    if periodic:
        def sh(k):
            return np.roll(f, -k, axis=axis)
        return (-sh(2) + 8.0 * sh(1) - 8.0 * sh(-1) + sh(-2)) / (12.0 * h)
    out = np.empty_like(f)
    sl = [slice(None)] * f.ndim

    def view(lo, hi):
        s = sl.copy()
        s[axis] = slice(lo, hi)
        return tuple(s)

    fm2, fm1 = f[view(0, -4)], f[view(1, -3)]
    fp1, fp2 = f[view(3, -1)], f[view(4, None)]
    out[view(2, -2)] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    # one-sided second order at the four edge rows
    g = np.gradient(f, h, axis=axis)
    out[view(0, 2)] = g[view(0, 2)]
    out[view(-2, None)] = g[view(-2, None)]
    return out


def magnetic_field_analytic(gspec: GaugeFieldSpec, ev: EvanescentField,
                            x: Optional[np.ndarray] = None,
                            y: Optional[np.ndarray] = None,
                            dr: float = 10e-9, n_phi: int = 512,
                            peak_coupling: Optional[float] = None):
    """(B_r, B_phi) on a Cartesian grid via the closed-form curl.

    Differentiates the coupling profile x(r, phi) with fourth-order
    stencils on an oversampled polar grid, applies the chain rule of the
    saturation bracket,

        B_phi = +P s x' / (1 + s^2 x)^2,   B_r = -P s (x^phi / r) / (1 + s^2 x)^2,

    and resamples bilinearly onto the target grid (the field's own grid
    by default). Points inside the fiber get zero.
    """
    if x is None:
        x = ev.x
    if y is None:
        y = ev.y
    a = ev.spec.radius_a
    r_max = float(np.hypot(np.abs(x).max(), np.abs(y).max())) + 5 * dr
    r = np.arange(a + dr, r_max, dr)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    cpl2 = _coupling_profile_polar(gspec, ev, r, phi)
    if peak_coupling is None:
        peak_coupling = float(np.sqrt(cpl2.max()))
    if peak_coupling == 0.0:
        zeros = np.zeros((np.size(x), np.size(y)))
        return zeros, zeros.copy()
    s = peak_coupling / (HBAR * abs(gspec.detuning_delta))
    x_prof = cpl2 / peak_coupling**2
    dx_dr = _d4(x_prof, dr, axis=0, periodic=False)
    dx_dphi = _d4(x_prof, phi[1] - phi[0], axis=1, periodic=True)
    denom = (1.0 + s**2 * x_prof) ** 2
    pref = gspec.prefactor * s
    b_phi_pol = pref * dx_dr / denom
    b_r_pol = -pref * (dx_dphi / r[:, None]) / denom

    xx = np.asarray(x)[:, None]
    yy = np.asarray(y)[None, :]
    rr = np.hypot(xx, yy)
    pp = np.mod(np.arctan2(yy, xx), 2.0 * np.pi)
    ir = (rr - r[0]) / dr
    ip = pp / (phi[1] - phi[0])
    coords = np.broadcast_arrays(ir, ip)
    coords = np.stack([c.ravel() for c in coords])
    b_r = map_coordinates(b_r_pol, coords, order=1, mode="grid-wrap").reshape(rr.shape)
    b_phi = map_coordinates(b_phi_pol, coords, order=1, mode="grid-wrap").reshape(rr.shape)
    outside = rr >= a
    return np.where(outside, b_r, 0.0), np.where(outside, b_phi, 0.0)


def magnetic_field_numeric(a_z: np.ndarray, x: np.ndarray, y: np.ndarray,
                           check: bool = False, max_richardson: float = 0.05):
    """(B_r, B_phi) from second-order central differences of a sampled A_z.

    Uses the same orientation as the analytic operation, i.e. the negative
    Cartesian curl (B_x, B_y) = (-dA/dy, +dA/dx) rotated into polar
    components, so that an azimuthally symmetric A_z gives B_phi = dA_z/dr.
    With ``check=True`` a Richardson estimate (comparing against the
    stride-2 curl) raises :class:`GridTooCoarse` when the relative L2
    discrepancy exceeds ``max_richardson``.
    """
    dx = float(x[1] - x[0])
    dy = float(y[1] - y[0])
    b_x = -np.gradient(a_z, dy, axis=1)
    b_y = np.gradient(a_z, dx, axis=0)
    xx = np.asarray(x)[:, None]
    yy = np.asarray(y)[None, :]
    rr = np.hypot(xx, yy)
    cos_p = np.divide(xx, rr, out=np.zeros_like(rr), where=rr > 0)
    sin_p = np.divide(yy, rr, out=np.zeros_like(rr), where=rr > 0)
    b_r = b_x * cos_p + b_y * sin_p
    b_phi = -b_x * sin_p + b_y * cos_p
    if check:
        a2 = a_z[::2, ::2]
        bx2 = -np.gradient(a2, 2 * dy, axis=1)
        by2 = np.gradient(a2, 2 * dx, axis=0)
        fine = np.hypot(b_x, b_y)[::2, ::2]
        coarse = np.hypot(bx2, by2)
        scale = np.sqrt(np.mean(fine**2))
        err = np.sqrt(np.mean((fine - coarse) ** 2)) / (3.0 * scale) if scale > 0 else 0.0
        if err > max_richardson:
            raise GridTooCoarse(
                f"Richardson curl error estimate {err:.2%} exceeds {max_richardson:.0%}"
            )
    return b_r, b_phi


def build_gauge_grid(gspec: GaugeFieldSpec, ev: EvanescentField,
                     with_b: bool = True, dr: float = 10e-9,
                     n_phi: int = 512) -> GaugeGrid:
    """Evaluate A_z (and optionally B) on the field's Cartesian grid."""
    cpl = np.abs(coupling(gspec, ev.e_r, ev.e_phi, ev.e_z))
    peak = float(cpl.max())
    a_z = vector_potential(gspec, ev.components(), peak_coupling=peak if peak > 0 else None)
    s = peak / (HBAR * abs(gspec.detuning_delta))
    if with_b and peak > 0:
        b_r, b_phi = magnetic_field_analytic(gspec, ev, dr=dr, n_phi=n_phi)
    else:
        b_r = np.zeros_like(a_z)
        b_phi = np.zeros_like(a_z)
    meta = {
        "power_w": ev.power,
        "polarization": ev.pol.kind,
        "ell": ev.mode.ell,
        "branch": ev.mode.branch,
        "kappa0_per_m": gspec.kappa0,
        "detuning_rad_s": gspec.detuning_delta,
        "n1": gspec.n1,
    }
    return GaugeGrid(x=ev.x.copy(), y=ev.y.copy(), a_z=a_z, b_r=b_r,
                     b_phi=b_phi, s_tilde=float(s), peak_coupling=peak,
                     meta=meta)


def curl_discrepancy(gspec: GaugeFieldSpec, ev: EvanescentField,
                     r_min: Optional[float] = None,
                     r_max: Optional[float] = None,
                     dx_fine: float = 10e-9) -> float:
    """Relative L2 distance between analytic B and the numeric curl of A_z.

    A_z is resampled on a dedicated fine Cartesian grid (default 10 nm, the
    spacing at which second differences resolve the evanescent scale) and
    compared against the analytic operation over the annulus
    [a + 50 nm, a + 3 um] unless overridden. This is the mutual-oracle
    check for the two B-field code paths.
    """
    a = ev.spec.radius_a
    if r_min is None:
        r_min = a + SURFACE_SKIN_M
    if r_max is None:
        r_max = a + 3e-6
    half = r_max + 20 * dx_fine
    n = int(np.ceil(2 * half / dx_fine))
    xf = (np.arange(n) - n // 2) * dx_fine
    xx = xf[:, None]
    yy = xf[None, :]
    rr = np.hypot(xx, yy)
    pp = np.arctan2(yy, xx)
    outside = rr >= a
    r_safe = np.where(outside, rr, a)
    e = evaluate_field(ev.mode, ev.spec, ev.pol, r_safe, pp, amplitude=ev.amplitude)
    cpl = np.abs(coupling(gspec, *e))
    cpl = np.where(outside, cpl, 0.0)
    peak = float(cpl.max())
    a_z = vector_potential(gspec, e, peak_coupling=peak)
    a_z = np.where(outside, a_z, 0.0)
    nb_r, nb_phi = magnetic_field_numeric(a_z, xf, xf)
    ab_r, ab_phi = magnetic_field_analytic(gspec, ev, x=xf, y=xf,
                                           peak_coupling=peak)
    mask = (rr >= r_min) & (rr <= r_max)
    mask[[0, -1], :] = False
    mask[:, [0, -1]] = False
    diff = (ab_r - nb_r)[mask] ** 2 + (ab_phi - nb_phi)[mask] ** 2
    ref = ab_r[mask] ** 2 + ab_phi[mask] ** 2
    return float(np.sqrt(diff.sum() / ref.sum()))


__all__ = [
    "GaugeFieldSpec",
    "GaugeGrid",
    "ZeroDetuning",
    "GridTooCoarse",
    "SURFACE_SKIN_M",
    "coupling",
    "saturation",
    "vector_potential",
    "magnetic_field_analytic",
    "magnetic_field_numeric",
    "build_gauge_grid",
    "curl_discrepancy",
]

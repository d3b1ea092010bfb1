"""Vortex detection and characterization in a 3D condensate field.

Detection geometry is poloidal: the wavefunction is resampled onto rz
half-planes at many azimuthal angles, where rings pierce transversally,
and quantized circulation is located cell by cell from the phase winding
around grid plaquettes. Core punctures are then linked slice-to-slice
into polylines (rings when they close on themselves around the fiber).
A Sobel-filtered density map supports isosurface-style visualization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import ndimage

from .grids import Grid3D, Wavefunction

#: Fraction of the density maximum below which phase is considered noise.
DENSITY_FLOOR_FRAC = 1e-4


class BelowDensityFloor(ValueError):
    """Plaquette touches the low-density region; winding is indeterminate."""


class EmptySkeleton(ValueError):
    """Census requested on a skeleton with no cores."""


@dataclass
class SobelMap:
    """Gradient-magnitude map of the density, with an isosurface level."""

    magnitude: np.ndarray
    threshold: float = 0.3

    @property
    def level(self) -> float:
        return self.threshold * float(self.magnitude.max())


def sobel_density(wf: Wavefunction, threshold: float = 0.3) -> SobelMap:
    """3x3x3 Sobel gradient magnitude of |psi|^2 (periodic boundaries).

    Responds at density depressions (vortex cores) and at the condensate
    surface; exactly linear in the density scale.
    """
    dens = wf.density()
    gx = ndimage.sobel(dens, axis=0, mode="wrap")
    gy = ndimage.sobel(dens, axis=1, mode="wrap")
    gz = ndimage.sobel(dens, axis=2, mode="wrap")
    return SobelMap(np.sqrt(gx**2 + gy**2 + gz**2), threshold)


def _wrap_angle(d):
    return (d + np.pi) % (2.0 * np.pi) - np.pi


def winding_map(psi2d: np.ndarray, density_floor_frac: float = DENSITY_FLOOR_FRAC):
    """Integer phase winding on every plaquette of a complex 2D field.

    Returns (w, valid): w[i, j] is the circulation quantum around the cell
    with corners (i, j), (i+1, j), (i+1, j+1), (i, j+1); valid flags
    plaquettes whose four corner densities all clear the floor.
    """
    theta = np.angle(psi2d)
    dens = np.abs(psi2d) ** 2
    floor = density_floor_frac * dens.max()
    d1 = _wrap_angle(theta[1:, :-1] - theta[:-1, :-1])
    d2 = _wrap_angle(theta[1:, 1:] - theta[1:, :-1])
    d3 = _wrap_angle(theta[:-1, 1:] - theta[1:, 1:])
    d4 = _wrap_angle(theta[:-1, :-1] - theta[:-1, 1:])
    w = np.rint((d1 + d2 + d3 + d4) / (2.0 * np.pi)).astype(int)
    ok = (dens[:-1, :-1] > floor) & (dens[1:, :-1] > floor) \
        & (dens[1:, 1:] > floor) & (dens[:-1, 1:] > floor)
    return w, ok


def plaquette_winding(psi2d: np.ndarray, i: int, j: int,
                      density_floor_frac: float = DENSITY_FLOOR_FRAC) -> int:
    """Winding of the single plaquette anchored at corner (i, j).

    Raises :class:`BelowDensityFloor` when any corner density is under the
    floor (phase there is numerically meaningless).
    """
    w, ok = winding_map(psi2d[i:i + 2, j:j + 2], density_floor_frac=0.0)
    dens = np.abs(psi2d) ** 2
    floor = density_floor_frac * dens.max()
    corners = dens[i:i + 2, j:j + 2]
    if np.any(corners <= floor):
        raise BelowDensityFloor(f"plaquette ({i}, {j}) corner below density floor")
    return int(w[0, 0])


def poloidal_slices(wf: Wavefunction, n_phi: int = 64,
                    n_r: Optional[int] = None, r_max: Optional[float] = None):
    """Resample psi onto rz half-planes at n_phi azimuthal angles.

    Returns (phis, r_axis, z_axis, slices) with slices of shape
    (n_phi, n_r, nz); real and imaginary parts are interpolated
    trilinearly (never the phase itself). Sample points sit half a cell
    off the underlying grid planes: cores of z-symmetric states land
    exactly on z = 0, and a singularity on a sampling line makes the
    plaquette phase steps of +-pi ambiguous.
    """
    grid = wf.grid
    if r_max is None:
        r_max = min(np.abs(grid.x).max(), np.abs(grid.y).max())
    if n_r is None:
        n_r = int(np.ceil(r_max / min(grid.dx, grid.dy)))
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    dr = r_max / n_r
    r_axis = (np.arange(n_r) + 0.5) * dr
    z_axis = grid.z + 0.5 * grid.dz
    ix = (r_axis[None, :, None] * np.cos(phis)[:, None, None] - grid.x[0]) / grid.dx
    iy = (r_axis[None, :, None] * np.sin(phis)[:, None, None] - grid.y[0]) / grid.dy
    iz = np.broadcast_to((np.arange(grid.nz) + 0.5)[None, None, :],
                         ix.shape + (grid.nz,))
    ixb = np.broadcast_to(ix[..., None], iz.shape)
    iyb = np.broadcast_to(iy[..., None], iz.shape)
    coords = np.stack([ixb.ravel(), iyb.ravel(), iz.ravel()])
    re = ndimage.map_coordinates(wf.psi.real, coords, order=1, mode="nearest")
    im = ndimage.map_coordinates(wf.psi.imag, coords, order=1, mode="nearest")
    slices = (re + 1j * im).reshape(n_phi, n_r, grid.nz)
    return phis, r_axis, z_axis, slices


@dataclass
class CorePoint:
    """A vortex-core puncture of one poloidal slice."""

    phi: float
    r: float
    z: float
    charge: int

    @property
    def xyz(self):
        return np.array([self.r * np.cos(self.phi), self.r * np.sin(self.phi), self.z])


def detect_core_points(wf: Wavefunction, n_phi: int = 64,
                       density_floor_frac: float = DENSITY_FLOOR_FRAC,
                       global_floor: bool = True) -> List[List[CorePoint]]:
    """Locate vortex punctures on every poloidal slice.

    Nonzero-winding plaquettes are clustered (connected components per
    sign) and reported at their charge-weighted centroid. The density
    floor is taken against the global density maximum by default so that
    empty slices cannot promote their own noise.
    """
    phis, r_axis, z_axis, slices = poloidal_slices(wf, n_phi=n_phi)
    dr = r_axis[1] - r_axis[0]
    dz = z_axis[1] - z_axis[0]
    global_max = float((np.abs(slices) ** 2).max())
    out: List[List[CorePoint]] = []
    for k, phi in enumerate(phis):
        psi2d = slices[k]
        w, ok = winding_map(psi2d, density_floor_frac=0.0)
        if global_floor:
            dens = np.abs(psi2d) ** 2
            floor = density_floor_frac * global_max
            ok = (dens[:-1, :-1] > floor) & (dens[1:, :-1] > floor) \
                & (dens[1:, 1:] > floor) & (dens[:-1, 1:] > floor)
        w = np.where(ok, w, 0)
        points = []
        for sign in (1, -1):
            labels, n_lab = ndimage.label(w * sign > 0)
            for lab in range(1, n_lab + 1):
                cells = np.argwhere(labels == lab)
                charge = int(w[labels == lab].sum())
                # plaquette center sits half a cell past the anchor corner
                r_c = float(np.mean(r_axis[cells[:, 0]]) + 0.5 * dr)
                z_c = float(np.mean(z_axis[cells[:, 1]]) + 0.5 * dz)
                points.append(CorePoint(phi=float(phi), r=r_c, z=z_c, charge=charge))
        out.append(points)
    return out


@dataclass
class VortexSkeleton:
    """Traced vortex cores: one polyline per core, with per-slice charges."""

    cores: List[np.ndarray] = field(default_factory=list)      # (M, 3) xyz, m
    charges: List[np.ndarray] = field(default_factory=list)    # (M,) ints
    closed: List[bool] = field(default_factory=list)
    polar: List[np.ndarray] = field(default_factory=list)      # (M, 3) phi, r, z
    ambiguous: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def n_rings(self) -> int:
        return int(sum(self.closed))

    def ring_radii(self):
        return [float(np.mean(p[:, 1])) for p, c in zip(self.polar, self.closed) if c]

    def ring_z(self):
        return [float(np.mean(p[:, 2])) for p, c in zip(self.polar, self.closed) if c]


def trace_cores(core_points: List[List[CorePoint]], grid: Grid3D,
                gap_tol_cells: float = 2.0, max_skip: int = 3) -> VortexSkeleton:
    """Link per-slice punctures into polylines around the torus.

    Greedy nearest-neighbour continuation in the rz plane between
    consecutive azimuthal slices (up to ``max_skip - 1`` consecutive
    missing slices may be bridged, for cores that dip under the density
    floor). When
    two candidate continuations both fall within tolerance and cannot be
    separated by the curvature tie-break, the skeleton is flagged
    ambiguous and both candidates are noted. A polyline is closed when it
    spans the full azimuth and its end returns to the starting puncture
    within one cell.
    """
    n_phi = len(core_points)
    cell = max(grid.dx, grid.dy, grid.dz)
    tol = gap_tol_cells * cell
    used = [[False] * len(pts) for pts in core_points]
    skel = VortexSkeleton()

    def candidates(k, point):
        cands = []
        for idx, other in enumerate(core_points[k]):
            if used[k][idx] or other.charge * point.charge <= 0:
                continue
            d = np.hypot(other.r - point.r, other.z - point.z)
            if d <= tol:
                cands.append((d, idx, other))
        cands.sort(key=lambda c: c[0])
        return cands

    def pick_continuation(cands, prev, prev2, slice_idx):
        pick = cands[0]
        if len(cands) > 1 and cands[1][0] <= tol:
            if prev2 is not None:
                vr, vz = prev.r - prev2.r, prev.z - prev2.z

                def bend(c):
                    wr, wz = c[2].r - prev.r, c[2].z - prev.z
                    return -(vr * wr + vz * wz) / (
                        np.hypot(vr, vz) * np.hypot(wr, wz) + 1e-300
                    )

                ranked = sorted(cands, key=bend)
                pick = ranked[0]
                not_separable = abs(bend(ranked[0]) - bend(ranked[1])) < 1e-3
            else:
                not_separable = True
            if not_separable:
                skel.ambiguous = True
                skel.notes.append(
                    f"ambiguous link at slice {slice_idx}: "
                    + ", ".join(f"(r={c[2].r:.3e}, z={c[2].z:.3e})"
                                for c in cands[:2])
                )
        return pick

    for k0 in range(n_phi):
        for i0 in range(len(core_points[k0])):
            if used[k0][i0]:
                continue
            start = core_points[k0][i0]
            chain = [start]
            used[k0][i0] = True
            prev, prev2 = start, None
            offset = 0  # slices advanced past k0
            while offset < n_phi - 1:
                advanced = False
                for skip in range(1, max_skip + 1):
                    if offset + skip > n_phi - 1:
                        break
                    kn = (k0 + offset + skip) % n_phi
                    cands = candidates(kn, prev)
                    if not cands:
                        continue
                    _, idx, nxt = pick_continuation(cands, prev, prev2, kn)
                    used[kn][idx] = True
                    chain.append(nxt)
                    prev2, prev = prev, nxt
                    offset += skip
                    advanced = True
                    break
                if not advanced:
                    break
            gap = np.hypot(chain[-1].r - start.r, chain[-1].z - start.z)
            spans_azimuth = offset >= n_phi - max_skip
            is_closed = bool(spans_azimuth and gap < cell)
            skel.cores.append(np.array([p.xyz for p in chain]))
            skel.polar.append(np.array([[p.phi, p.r, p.z] for p in chain]))
            skel.charges.append(np.array([p.charge for p in chain], dtype=int))
            skel.closed.append(is_closed)
    return skel


def nn_angle_mode(points: np.ndarray, n_bins: int = 36) -> float:
    """Mode of the neighbour-pair opening angle, in degrees.

    For each point, takes the neighbours within 1.35x the median
    nearest-neighbour distance (first shell only: square-lattice diagonals
    at sqrt(2) are excluded) and histograms the angles between consecutive
    neighbour bearings; 60 deg flags a triangular packing, 90 deg a square
    one.
    """
    n = len(points)
    if n < 3:
        return float("nan")
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    nn = d.min(axis=1)
    cut = 1.35 * np.median(nn)
    angles = []
    for i in range(n):
        nbr = np.where(d[i] <= cut)[0]
        if len(nbr) < 2:
            continue
        bearings = np.sort(np.arctan2(points[nbr, 1] - points[i, 1],
                                      points[nbr, 0] - points[i, 0]))
        gaps = np.diff(np.concatenate([bearings, bearings[:1] + 2 * np.pi]))
        angles.extend(np.degrees(gaps[gaps < np.pi]))
    if not angles:
        return float("nan")
    hist, edges = np.histogram(angles, bins=n_bins, range=(0.0, 180.0))
    i = int(np.argmax(hist))
    return float(0.5 * (edges[i] + edges[i + 1]))


@dataclass
class RingCensus:
    n_rings: int
    radii: List[float]
    z_means: List[float]
    lattice_metric: float


def ring_census(skel: VortexSkeleton) -> RingCensus:
    """Count closed rings and measure their poloidal arrangement."""
    if not skel.cores:
        raise EmptySkeleton("no cores traced")
    radii = skel.ring_radii()
    zs = skel.ring_z()
    pts = np.array([[r, z] for r, z in zip(radii, zs)])
    metric = nn_angle_mode(pts) if len(pts) >= 3 else float("nan")
    return RingCensus(n_rings=skel.n_rings, radii=radii, z_means=zs,
                      lattice_metric=metric)


def count_radial_lobes(skel: VortexSkeleton, n_bins: int = 64) -> int:
    """Dominant azimuthal harmonic of the skeleton's radial excursion r(phi).

    A core structure bending inwards at 2*ell azimuthal spots reports
    2*ell. Works on the union of all traced points (robust to a core that
    fragments where it dives under the density floor): r is averaged in
    phi bins, gaps are filled by periodic interpolation, and the largest
    nonzero Fourier harmonic of r(phi) wins.
    """
    if not skel.cores:
        raise EmptySkeleton("no cores traced")
    pts = np.concatenate(skel.polar, axis=0)
    phi = np.mod(pts[:, 0], 2.0 * np.pi)
    r = pts[:, 1]
    bins = np.floor(phi / (2.0 * np.pi / n_bins)).astype(int) % n_bins
    sums = np.bincount(bins, weights=r, minlength=n_bins)
    counts = np.bincount(bins, minlength=n_bins)
    filled = counts > 0
    if filled.sum() < 4:
        return 0
    prof = np.empty(n_bins)
    prof[filled] = sums[filled] / counts[filled]
    if not filled.all():
        centers = (np.arange(n_bins) + 0.5) * 2.0 * np.pi / n_bins
        prof[~filled] = np.interp(centers[~filled],
                                  np.concatenate([centers[filled] - 2 * np.pi,
                                                  centers[filled],
                                                  centers[filled] + 2 * np.pi]),
                                  np.tile(prof[filled], 3))
    spec = np.abs(np.fft.rfft(prof - prof.mean()))
    if len(spec) < 2 or spec[1:].max() == 0.0:
        return 0
    return int(np.argmax(spec[1:]) + 1)


def triangle_mesh(volume: np.ndarray, level: float, spacing, origin):
    """Isosurface triangle mesh (vertices, faces) at the given level."""
    from skimage.measure import marching_cubes

    verts, faces, _, _ = marching_cubes(volume, level=level, spacing=spacing)
    return verts + np.asarray(origin)[None, :], faces


__all__ = [
    "DENSITY_FLOOR_FRAC",
    "BelowDensityFloor",
    "EmptySkeleton",
    "SobelMap",
    "sobel_density",
    "winding_map",
    "plaquette_winding",
    "poloidal_slices",
    "CorePoint",
    "detect_core_points",
    "VortexSkeleton",
    "trace_cores",
    "nn_angle_mode",
    "RingCensus",
    "ring_census",
    "count_radial_lobes",
    "triangle_mesh",
]

"""Uniform Cartesian grid and condensate field containers."""

from __future__ import annotations

import numpy as np


class Grid3D:
    """Periodic, center-origin Cartesian grid.

    Coordinates run over (arange(n) - n//2) * d per axis, so x = y = z = 0
    is a grid point and the box spans [-n/2, n/2 - 1] * d. Wavenumbers are
    FFT-ordered with max |k| = pi/d.
    """

    def __init__(self, nx: int, ny: int, nz: int, dx: float, dy=None, dz=None):
        dy = dx if dy is None else dy
        dz = dx if dz is None else dz
        for n in (nx, ny, nz):
            if n < 8 or n % 2:
                raise ValueError("grid dims must be even and >= 8")
        if min(dx, dy, dz) <= 0:
            raise ValueError("grid spacing must be positive")
        self.nx, self.ny, self.nz = nx, ny, nz
        self.dx, self.dy, self.dz = float(dx), float(dy), float(dz)
        self.x = (np.arange(nx) - nx // 2) * self.dx
        self.y = (np.arange(ny) - ny // 2) * self.dy
        self.z = (np.arange(nz) - nz // 2) * self.dz
        self.kx = 2.0 * np.pi * np.fft.fftfreq(nx, d=self.dx)
        self.ky = 2.0 * np.pi * np.fft.fftfreq(ny, d=self.dy)
        self.kz = 2.0 * np.pi * np.fft.fftfreq(nz, d=self.dz)

    @property
    def shape(self):
        return (self.nx, self.ny, self.nz)

    @property
    def dvol(self) -> float:
        return self.dx * self.dy * self.dz

    # broadcastable coordinate views
    @property
    def xb(self):
        return self.x[:, None, None]

    @property
    def yb(self):
        return self.y[None, :, None]

    @property
    def zb(self):
        return self.z[None, None, :]

    @property
    def rho(self):
        """Cylindrical radius sqrt(x^2+y^2), shape (nx, ny, 1)."""
        return np.hypot(self.x[:, None], self.y[None, :])[:, :, None]

    def k_squared(self):
        return (self.kx[:, None, None] ** 2 + self.ky[None, :, None] ** 2
                + self.kz[None, None, :] ** 2)


class Wavefunction:
    """Complex condensate field with the norm convention integral |psi|^2 dV = N."""

    def __init__(self, psi: np.ndarray, grid: Grid3D):
        if psi.shape != grid.shape:
            raise ValueError(f"psi shape {psi.shape} != grid shape {grid.shape}")
        self.psi = np.ascontiguousarray(psi, dtype=np.complex128)
        self.grid = grid

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2).real * self.grid.dvol)

    def normalize(self, atom_number: float) -> "Wavefunction":
        n = self.norm()
        if not np.isfinite(n) or n <= 0:
            raise ValueError("cannot normalize: norm is zero or non-finite")
        self.psi *= np.sqrt(atom_number / n)
        return self

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def copy(self) -> "Wavefunction":
        return Wavefunction(self.psi.copy(), self.grid)


__all__ = ["Grid3D", "Wavefunction"]

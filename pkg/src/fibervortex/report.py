"""Matplotlib figure rendering for the CLI report paths.

Every subcommand that emits delimited output can also render a figure
next to it (--figures). All rendering is headless (Agg) and file-based.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_field_figure(path, ev) -> None:
    """Intensity map of a sampled evanescent field."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    inten = ev.intensity
    um = 1e6
    extent = [ev.x[0] * um, ev.x[-1] * um, ev.y[0] * um, ev.y[-1] * um]
    im = ax1.imshow(inten.T, origin="lower", extent=extent, cmap="inferno")
    fig.colorbar(im, ax=ax1, label=r"$|E|^2$ (V$^2$/m$^2$)")
    ax1.set_xlabel(r"x ($\mu$m)")
    ax1.set_ylabel(r"y ($\mu$m)")
    ax1.set_title(f"{ev.pol.kind} HE{ev.mode.ell}{ev.mode.branch}, "
                  f"P = {ev.power * 1e9:.3g} nW")
    mid = len(ev.y) // 2
    ax2.semilogy(ev.x * um, np.maximum(inten[:, mid], 1e-300))
    ax2.set_xlabel(r"x ($\mu$m)")
    ax2.set_ylabel(r"$|E|^2$ along y = 0")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_gauge_figure(path, gg) -> None:
    """A_z map plus radial profiles of A_z and B_phi along the x axis."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    um = 1e6
    extent = [gg.x[0] * um, gg.x[-1] * um, gg.y[0] * um, gg.y[-1] * um]
    im = ax1.imshow(gg.a_z.T, origin="lower", extent=extent, cmap="viridis")
    fig.colorbar(im, ax=ax1, label=r"$A_z$ (kg m/s)")
    ax1.set_xlabel(r"x ($\mu$m)")
    ax1.set_ylabel(r"y ($\mu$m)")
    ax1.set_title(rf"$\tilde s$ = {gg.s_tilde:.3g}")
    mid = len(gg.y) // 2
    half = gg.x > 0
    ax2.plot(gg.x[half] * um, gg.a_z[half, mid], label=r"$A_z$")
    ax2b = ax2.twinx()
    ax2b.plot(gg.x[half] * um, gg.b_phi[half, mid], "C1--", label=r"$B_\phi$")
    ax2.set_xlabel(r"x ($\mu$m)")
    ax2.set_ylabel(r"$A_z$ (kg m/s)")
    ax2b.set_ylabel(r"$B_\phi$ (kg/s)")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_observables_figure(path, rows) -> None:
    """Time traces of the energies and the poloidal moments."""
    t = np.array([r["t"] for r in rows]) * 1e3
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    for key in ("E_total", "E_kin", "E_trap", "E_int", "E_gauge"):
        axes[0, 0].plot(t, [r[key] for r in rows], label=key)
    axes[0, 0].set_ylabel("energy (J)")
    axes[0, 0].legend(fontsize=8)
    axes[0, 1].plot(t, [r["norm"] for r in rows])
    axes[0, 1].set_ylabel("atom number")
    axes[1, 0].plot(t, [r["angle"] for r in rows])
    axes[1, 0].set_ylabel("angle (rad)")
    axes[1, 0].set_xlabel("t (ms)")
    axes[1, 1].plot(t, [r["lz_pol"] for r in rows])
    axes[1, 1].set_ylabel(r"$\langle l_z\rangle$ (J s)")
    axes[1, 1].set_xlabel("t (ms)")
    for ax in axes.flat:
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_density_figure(path, wf, params=None) -> None:
    """Column density and midplane slice of |psi|^2."""
    grid = wf.grid
    dens = wf.density()
    um = 1e6
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    im = ax1.imshow(dens.sum(axis=2).T, origin="lower",
                    extent=[grid.x[0] * um, grid.x[-1] * um,
                            grid.y[0] * um, grid.y[-1] * um], cmap="magma")
    fig.colorbar(im, ax=ax1, label="column density")
    ax1.set_xlabel(r"x ($\mu$m)")
    ax1.set_ylabel(r"y ($\mu$m)")
    half = grid.x > 0
    im2 = ax2.imshow(dens[half, grid.ny // 2, :].T, origin="lower",
                     extent=[grid.x[half][0] * um, grid.x[-1] * um,
                             grid.z[0] * um, grid.z[-1] * um],
                     aspect="auto", cmap="magma")
    fig.colorbar(im2, ax=ax2, label=r"$|\psi|^2$")
    ax2.set_xlabel(r"r ($\mu$m)")
    ax2.set_ylabel(r"z ($\mu$m)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_skeleton_figure(path, skel, sobel=None, grid=None) -> None:
    """Traced cores in 3D and their poloidal footprint."""
    fig = plt.figure(figsize=(10, 4.5))
    ax1 = fig.add_subplot(1, 2, 1, projection="3d")
    um = 1e6
    for pts, closed in zip(skel.cores, skel.closed):
        p = np.vstack([pts, pts[:1]]) if closed else pts
        ax1.plot(p[:, 0] * um, p[:, 1] * um, p[:, 2] * um,
                 "-" if closed else "--", lw=1.5)
    ax1.set_xlabel(r"x ($\mu$m)")
    ax1.set_ylabel(r"y ($\mu$m)")
    ax1.set_zlabel(r"z ($\mu$m)")
    ax1.set_title(f"{skel.n_rings} closed ring(s)")
    ax2 = fig.add_subplot(1, 2, 2)
    for track, closed in zip(skel.polar, skel.closed):
        ax2.plot(track[:, 1] * um, track[:, 2] * um,
                 "o" if closed else "x", ms=2.5)
    ax2.set_xlabel(r"r ($\mu$m)")
    ax2.set_ylabel(r"z ($\mu$m)")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scissors_figure(path, rec, fit=None) -> None:
    """Angle trace, its spectrum, and the fitted model."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    t_ms = rec.times * 1e3
    ax1.plot(t_ms, rec.angle, "C0", lw=1, label="angle")
    if fit is not None:
        env = np.exp(-fit.damping * rec.times)
        model = fit.offset * np.ones_like(rec.times)
        for om, a, ph in zip(fit.omegas, fit.amplitudes, fit.phases):
            model = model + a * env * np.cos(om * rec.times + ph)
        ax1.plot(t_ms, model, "C3--", lw=1,
                 label=f"fit ({', '.join(f'{om:.0f}' for om in fit.omegas)} rad/s)")
    ax1.set_xlabel("t (ms)")
    ax1.set_ylabel("condensate angle (rad)")
    ax1.legend(fontsize=8)
    ax1.grid(alpha=0.3)
    y = rec.angle - rec.angle.mean()
    spec = np.abs(np.fft.rfft(y * np.hanning(len(y))))
    freq = 2 * np.pi * np.fft.rfftfreq(len(y), d=rec.sample_dt)
    ax2.semilogy(freq, np.maximum(spec, 1e-300))
    if fit is not None:
        for om in fit.omegas:
            ax2.axvline(om, color="C3", ls="--", alpha=0.6)
    ax2.set_xlim(0, min(freq[-1], 4 * max(freq[np.argmax(spec)], 1.0)))
    ax2.set_xlabel(r"$\omega$ (rad/s)")
    ax2.set_ylabel("spectral amplitude")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(path, rows, key) -> None:
    """Ring count and angular momentum against the swept key."""
    x = [r[key] for r in rows]
    fig, ax1 = plt.subplots(figsize=(6, 4.2))
    ax1.step(x, [r["n_rings"] for r in rows], "C0o-", where="post")
    ax1.set_xlabel(key)
    ax1.set_ylabel("closed rings", color="C0")
    ax2 = ax1.twinx()
    ax2.plot(x, [r["lz_pol"] for r in rows], "C1s--")
    ax2.set_ylabel(r"$\langle l_z\rangle$ (J s)", color="C1")
    ax1.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


__all__ = [
    "save_field_figure",
    "save_gauge_figure",
    "save_observables_figure",
    "save_density_figure",
    "save_skeleton_figure",
    "save_scissors_figure",
    "save_sweep_figure",
]

"""Command-line pipeline: modes, field, gauge, groundstate, evolve,
detect, scissors, sweep.

Stages communicate through files: EVF1 field grids, GAU1 gauge grids,
PSI1 wavefunction checkpoints, and CSV time series. Exit codes: 0 ok,
2 configuration error, 3 numerical failure, 4 missing upstream artifact.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import diagnostics as dg
from . import fiber as fib
from . import fileio as fio
from . import gauge as gau
from . import gpe
from . import scissors as sci
from .config import ConfigError, RunConfig, parse_config
from .constants import HBAR
from .grids import Grid3D, Wavefunction

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_UPSTREAM = 4


class MissingUpstream(FileNotFoundError):
    """A required input artifact is absent; names the producing stage."""

    def __init__(self, path, producer):
        super().__init__(
            f"missing upstream artifact {path!r}: produce it with the "
            f"`{producer}` stage first"
        )


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _write_provenance(outdir: str, cfg: RunConfig) -> None:
    record = cfg.provenance()
    record["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    with open(os.path.join(outdir, "provenance.json"), "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)


def _require(path, producer):
    if not path or not os.path.exists(path):
        raise MissingUpstream(path, producer)
    return path


def _solve_mode(cfg: RunConfig):
    spec = cfg.fiber_spec()
    return spec, fib.solve_mode(spec, cfg["fiber.ell"], cfg["fiber.branch"])


def _sample_power_field(cfg: RunConfig, grid_x, grid_y):
    spec, mode = _solve_mode(cfg)
    pol = cfg.polarization()
    ev = fib.sample_field(mode, spec, pol, grid_x, grid_y)
    power = cfg["field.power_w"]
    if power > 0:
        ev = fib.power_normalize(ev, power)
    return ev


def _field_meta(cfg: RunConfig, ev) -> dict:
    return {
        "config_sha256": cfg.sha256,
        "code_version": __version__,
        "basis": "cylindrical",
        "components": ["e_r", "e_phi", "e_z"],
        "radius_m": ev.spec.radius_a,
        "wavelength_m": ev.spec.wavelength,
        "n1": ev.spec.n1,
        "n2": ev.spec.n2,
        "ell": ev.mode.ell,
        "branch": ev.mode.branch,
        "pol_kind": ev.pol.kind,
        "pol_sign": ev.pol.sign,
        "pol_phi0_rad": ev.pol.phi0,
        "pol_mixing": ev.pol.mixing,
        "pol_relative_phase_rad": ev.pol.relative_phase,
        "amplitude": ev.amplitude,
        "power_w": ev.power,
    }


def _field_from_file(path) -> fib.EvanescentField:
    gf = fio.read_grid(path, expect_magic=fio.MAGIC_FIELD)
    meta = gf.meta
    spec = fib.FiberSpec(radius_a=meta["radius_m"], wavelength=meta["wavelength_m"],
                         n1=meta["n1"], n2=meta["n2"])
    mode = fib.solve_mode(spec, meta["ell"], meta["branch"])
    pol = fib.PolarizationSpec(kind=meta["pol_kind"], sign=meta["pol_sign"],
                               phi0=meta["pol_phi0_rad"], mixing=meta["pol_mixing"],
                               relative_phase=meta["pol_relative_phase_rad"])
    nx, ny, _ = gf.dims
    dx, dy, _ = gf.spacing
    x = (np.arange(nx) - nx // 2) * dx
    y = (np.arange(ny) - ny // 2) * dy
    e_r, e_phi, e_z = (gf.data[i, :, :, 0] for i in range(3))
    rr = np.hypot(x[:, None], y[None, :])
    return fib.EvanescentField(x=x, y=y, e_r=e_r, e_phi=e_phi, e_z=e_z,
                               inside=rr < spec.radius_a, mode=mode, spec=spec,
                               pol=pol, amplitude=meta["amplitude"],
                               power=meta["power_w"])


def _load_psi(path) -> Wavefunction:
    gf = fio.read_grid(path, expect_magic=fio.MAGIC_PSI)
    nx, ny, nz = gf.dims
    grid = Grid3D(nx, ny, nz, dx=gf.spacing[0], dy=gf.spacing[1], dz=gf.spacing[2])
    return Wavefunction(gf.data[0], grid)


def _base_potential(cfg: RunConfig, params, grid):
    v = gpe.toroidal_trap(params, grid)
    return gpe.add_fiber_wall(v, grid, params, cfg["fiber.radius_m"],
                              clearance=cfg["sim.wall_clearance_m"],
                              height=cfg["sim.wall_height_mu"]
                              * gpe.thomas_fermi_mu(params))


def _load_gauge(args, cfg: RunConfig):
    """Gauge grid from --gauge, then config gauge.file; None otherwise."""
    path = getattr(args, "gauge", "") or cfg["gauge.file"]
    if not path:
        return None
    _require(path, "gauge")
    gf = fio.read_grid(path, expect_magic=fio.MAGIC_GAUGE)
    nx, ny, _ = gf.dims
    dx, dy, _ = gf.spacing
    x = (np.arange(nx) - nx // 2) * dx
    y = (np.arange(ny) - ny // 2) * dy
    return gau.GaugeGrid(x=x, y=y, a_z=gf.data[0, :, :, 0],
                         b_r=gf.data[1, :, :, 0], b_phi=gf.data[2, :, :, 0],
                         s_tilde=gf.meta.get("s_tilde", 0.0),
                         peak_coupling=gf.meta.get("peak_coupling", 0.0),
                         meta=gf.meta)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_modes(args, cfg: RunConfig) -> int:
    spec = cfg.fiber_spec()
    v = fib.v_number(spec)
    modes = fib.supported_he_modes(spec)
    print(f"V number        : {v:.6f}  (higher-order cutoff {fib.V_CUTOFF})")
    print(f"core index n1   : {spec.n1:.6f}   cladding n2: {spec.n2:.4f}")
    print(f"guided HE modes : {len(modes)}")
    header = f"{'mode':>8} {'beta (1/m)':>16} {'beta/k0':>10} {'h (1/m)':>13} " \
             f"{'q (1/m)':>13} {'s':>9}"
    print(header)
    for m in modes:
        print(f"  HE{m.ell}{m.branch:<4} {m.beta:16.8e} {m.beta / spec.k0:10.6f} "
              f"{m.h:13.6e} {m.q:13.6e} {m.s_param:9.5f}")
    if args.csv:
        rows = [{"ell": m.ell, "branch": m.branch, "beta": m.beta, "h": m.h,
                 "q": m.q, "s": m.s_param, "C": m.c_norm} for m in modes]
        fio.write_csv(args.csv, ["ell", "branch", "beta", "h", "q", "s", "C"], rows)
        print(f"wrote {args.csv}")
    return EXIT_OK


def cmd_field(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    grid = cfg.grid()
    ev = _sample_power_field(cfg, grid.x, grid.y)
    meta = _field_meta(cfg, ev)
    path = os.path.join(outdir, "field.evf")
    data = np.stack([ev.e_r[:, :, None], ev.e_phi[:, :, None], ev.e_z[:, :, None]])
    fio.write_grid(path, fio.MAGIC_FIELD, data, (grid.dx, grid.dy, grid.dz), meta=meta)
    with open(os.path.join(outdir, "field.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    _write_provenance(outdir, cfg)
    print(f"wrote {path} ({ev.pol.kind} HE{ev.mode.ell}{ev.mode.branch}, "
          f"P = {ev.power * 1e9:.4g} nW, max|E| = {np.sqrt(ev.intensity.max()):.4g} V/m)")
    if args.figures:
        from . import report

        figpath = os.path.join(outdir, "field.png")
        report.save_field_figure(figpath, ev)
        print(f"wrote {figpath}")
    return EXIT_OK


def cmd_gauge(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    path = _require(args.field, "field")
    ev = _field_from_file(path)
    gspec = cfg.gauge_spec()
    gg = gau.build_gauge_grid(gspec, ev)
    meta = {
        "config_sha256": cfg.sha256,
        "code_version": __version__,
        "components": ["a_z", "b_r", "b_phi"],
        "s_tilde": gg.s_tilde,
        "peak_coupling": gg.peak_coupling,
        **gg.meta,
    }
    out = os.path.join(outdir, "gauge.gau")
    data = np.stack([gg.a_z[:, :, None], gg.b_r[:, :, None], gg.b_phi[:, :, None]])
    dx = gg.x[1] - gg.x[0]
    dy = gg.y[1] - gg.y[0]
    fio.write_grid(out, fio.MAGIC_GAUGE, data, (dx, dy, dx), meta=meta)
    with open(os.path.join(outdir, "gauge.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    _write_provenance(outdir, cfg)
    print(f"wrote {out} (s_tilde = {gg.s_tilde:.6g}, "
          f"max A_z = {gg.a_z.max():.6g} kg m/s)")
    if args.check_curl:
        disc = gau.curl_discrepancy(gspec, ev)
        print(f"analytic vs numeric curl, relative L2: {disc:.6e}")
    if args.figures:
        from . import report

        figpath = os.path.join(outdir, "gauge.png")
        report.save_gauge_figure(figpath, gg)
        print(f"wrote {figpath}")
    return EXIT_OK


def _relax(cfg, params, grid, terms, psi0=None):
    return gpe.imaginary_time_ground_state(
        params, grid, terms, tol=cfg["sim.imag_tol"],
        max_steps=cfg["sim.imag_max_steps"], psi0=psi0)


def ground_state_pipeline(cfg: RunConfig, gauge_grid=None, warm_start=None):
    """Relax candidate initial states and keep the lowest-energy result.

    Candidates: plain Thomas-Fermi guess, optionally a ring-imprinted
    guess (sim.seed_ring) and a supplied warm start. Returns
    (Wavefunction, observables, info).
    """
    params = cfg.sim_params()
    grid = cfg.grid()
    v = _base_potential(cfg, params, grid)
    terms = gpe.build_hamiltonian_terms(params, grid, v, gauge=gauge_grid)
    candidates = []
    wf, info = _relax(cfg, params, grid, terms)
    candidates.append((wf, info))
    if cfg["sim.seed_ring"] and cfg["sim.compare_seeded"]:
        seed_r = cfg["sim.seed_ring_r_m"] or params.eta
        guess = gpe.tf_initial_state(params, grid, terms.v_trap)
        gpe.ring_imprint(guess, seed_r, 0.0, sign=cfg["sim.seed_ring_sign"])
        candidates.append(_relax(cfg, params, grid, terms, psi0=guess))
    if warm_start is not None:
        candidates.append(_relax(cfg, params, grid, terms, psi0=warm_start))
    scored = [(gpe.observables(w, params, terms), w, info)
              for (w, info) in candidates]
    obs, wf, info = min(scored, key=lambda s: s[0]["E_total"])
    return wf, obs, info, terms


def _write_state(outdir, name, wf, obs, cfg, step=0):
    path = os.path.join(outdir, name)
    fio.write_grid(path, fio.MAGIC_PSI, wf.psi[None, ...],
                   (wf.grid.dx, wf.grid.dy, wf.grid.dz), step=step,
                   meta={"config_sha256": cfg.sha256, "code_version": __version__})
    return path


def cmd_groundstate(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    gauge_grid = _load_gauge(args, cfg)
    wf, obs, info, _ = ground_state_pipeline(cfg, gauge_grid)
    path = _write_state(outdir, "ground.psi1", wf, obs, cfg, step=info["steps"])
    obs_row = dict(obs)
    obs_row["step"] = info["steps"]
    obs_row["t"] = 0.0
    fio.write_observables_csv(os.path.join(outdir, "observables.csv"), [obs_row])
    _write_provenance(outdir, cfg)
    print(f"wrote {path} (mu = {obs['mu']:.6e} J, E/N = "
          f"{obs['E_total'] / obs['norm']:.6e} J, {info['steps']} steps)")
    if args.figures:
        from . import report

        report.save_density_figure(os.path.join(outdir, "ground.png"), wf)
        print(f"wrote {os.path.join(outdir, 'ground.png')}")
    return EXIT_OK


def cmd_evolve(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    wf0 = _load_psi(_require(args.psi, "groundstate"))
    params = cfg.sim_params()
    grid = wf0.grid
    v = _base_potential(cfg, params, grid)
    gauge_grid = _load_gauge(args, cfg)
    terms = gpe.build_hamiltonian_terms(params, grid, v, gauge=gauge_grid)
    steps = cfg["sim.steps"] or int(round(1e-3 / params.dt))
    t_final = steps * params.dt
    wf, rows = gpe.real_time_evolve(params, grid, terms, wf0, t_final,
                                    sample_every=cfg["sim.sample_every"])
    fio.write_observables_csv(os.path.join(outdir, "observables.csv"), rows)
    path = _write_state(outdir, "final.psi1", wf, rows[-1], cfg, step=steps)
    _write_provenance(outdir, cfg)
    print(f"evolved {t_final * 1e3:.4g} ms ({steps} steps); wrote {path}")
    if args.figures:
        from . import report

        report.save_observables_figure(os.path.join(outdir, "observables.png"), rows)
        print(f"wrote {os.path.join(outdir, 'observables.png')}")
    return EXIT_OK


def cmd_detect(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    wf = _load_psi(_require(args.psi, "groundstate"))
    n_phi = cfg["detect.n_phi"]
    points = dg.detect_core_points(wf, n_phi=n_phi)
    skel = dg.trace_cores(points, wf.grid)
    rows = []
    for ring_id, (core, charges) in enumerate(zip(skel.cores, skel.charges)):
        for idx, (p, q) in enumerate(zip(core, charges)):
            rows.append({"ring_id": ring_id, "point_index": idx, "x": p[0],
                         "y": p[1], "z": p[2], "charge": int(q)})
    fio.write_csv(os.path.join(outdir, "skeleton.csv"),
                  ["ring_id", "point_index", "x", "y", "z", "charge"], rows)
    sobel = dg.sobel_density(wf, threshold=args.isosurface or cfg["detect.isosurface"])
    fio.write_grid(os.path.join(outdir, "sobel.gau"), fio.MAGIC_GAUGE,
                   sobel.magnitude[None, ...],
                   (wf.grid.dx, wf.grid.dy, wf.grid.dz),
                   meta={"kind": "sobel", "threshold": sobel.threshold,
                         "config_sha256": cfg.sha256})
    summary = {
        "n_rings": skel.n_rings,
        "n_cores": len(skel.cores),
        "radii_m": skel.ring_radii(),
        "z_m": skel.ring_z(),
        "ambiguous": skel.ambiguous,
    }
    if skel.cores:
        summary["radial_lobes"] = dg.count_radial_lobes(skel)
        try:
            summary["lattice_metric_deg"] = dg.ring_census(skel).lattice_metric
        except dg.EmptySkeleton:
            pass
    with open(os.path.join(outdir, "detect.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    if args.isosurface:
        verts, faces = dg.triangle_mesh(
            sobel.magnitude, sobel.level,
            (wf.grid.dx, wf.grid.dy, wf.grid.dz),
            (wf.grid.x[0], wf.grid.y[0], wf.grid.z[0]))
        fio.write_mesh(os.path.join(outdir, "isosurface.mesh"), verts, faces)
        print(f"wrote isosurface.mesh ({len(faces)} faces)")
    _write_provenance(outdir, cfg)
    print(f"rings: {skel.n_rings} (of {len(skel.cores)} traced cores); "
          f"radii: {['%.3g' % r for r in skel.ring_radii()]}")
    if args.figures and skel.cores:
        from . import report

        report.save_skeleton_figure(os.path.join(outdir, "skeleton.png"), skel)
        print(f"wrote {os.path.join(outdir, 'skeleton.png')}")
    return EXIT_OK


def cmd_scissors(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    wf0 = _load_psi(_require(args.psi, "groundstate"))
    params = cfg.sim_params()
    grid = wf0.grid
    base = _base_potential(cfg, params, grid)
    gauge_grid = _load_gauge(args, cfg)
    scfg = cfg.scissors_config()
    rec = sci.run_protocol(wf0, scfg, params, grid, base, gauge=gauge_grid)
    fio.write_csv(os.path.join(outdir, "scissors.csv"),
                  ["t", "angle", "rz_moment"],
                  [{"t": t, "angle": a, "rz_moment": m}
                   for t, a, m in zip(rec.times, rec.angle, rec.moment_rz)])
    n_modes = args.n_modes or cfg["scissors.n_modes"]
    lines = [
        f"scissors protocol: theta0 = {scfg.theta0} rad, t_final = {scfg.t_final} s",
        f"predicted vortex-free frequency: {sci.predicted_scissors(scfg):.4f} rad/s",
        f"mean <l_z>: {rec.lz_pol.mean():.6e} J s "
        f"({rec.lz_pol.mean() / HBAR:+.4f} hbar)",
        f"mean <r'^2+z^2>: {rec.r2z2.mean():.6e} m^2",
        f"predicted splitting: "
        f"{sci.predicted_splitting(rec.lz_pol.mean(), rec.r2z2.mean(), params.mass):.4f} rad/s",
    ]
    fit = None
    try:
        fit = sci.fit_frequencies(rec, n_modes=n_modes)
        if fit.model == "two_mode":
            row = {"omega_minus": fit.omega_minus, "omega_plus": fit.omega_plus,
                   "midpoint": fit.midpoint, "damping": fit.damping,
                   "residual": fit.residual}
        else:
            row = {"omega_minus": fit.omega, "omega_plus": fit.omega,
                   "midpoint": fit.omega, "damping": fit.damping,
                   "residual": fit.residual}
        fio.write_csv(os.path.join(outdir, "fit.csv"),
                      ["omega_minus", "omega_plus", "midpoint", "damping",
                       "residual"], [row])
        lines.append(f"fit ({fit.model}): omegas = "
                     + ", ".join(f"{om:.4f}" for om in fit.omegas)
                     + f" rad/s; damping = {fit.damping:.4g} 1/s; "
                       f"residual = {fit.residual:.4g}")
    except sci.FitRejected as exc:
        lines.append(f"fit rejected: {exc}")
        rejected = True
    else:
        rejected = False
    report_path = os.path.join(outdir, "fit_report.txt")
    with open(report_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_provenance(outdir, cfg)
    print("\n".join(lines))
    if args.figures:
        from . import report

        report.save_scissors_figure(os.path.join(outdir, "scissors.png"), rec, fit)
        print(f"wrote {os.path.join(outdir, 'scissors.png')}")
    if rejected:
        return EXIT_NUMERIC
    return EXIT_OK


def _sweep_point(cfg: RunConfig, key: str, value, warm_start=None):
    """One sweep point: field -> gauge -> ground state -> detection."""
    text = cfg.text + f"\n{key} = {value!r}\n"
    from .config import parse_config_text

    cfg_pt = parse_config_text(text, path=cfg.path)
    grid = cfg_pt.grid()
    gauge_grid = None
    if cfg_pt["field.power_w"] > 0:
        ev = _sample_power_field(cfg_pt, grid.x, grid.y)
        gauge_grid = gau.build_gauge_grid(cfg_pt.gauge_spec(), ev, with_b=False)
    wf, obs, info, _ = ground_state_pipeline(cfg_pt, gauge_grid,
                                             warm_start=warm_start)
    skel = dg.trace_cores(dg.detect_core_points(wf, n_phi=cfg_pt["detect.n_phi"]),
                          wf.grid)
    row = {
        key: value,
        "n_rings": skel.n_rings,
        "lz_pol": obs["lz_pol"],
        "mu": obs["mu"],
        "E_total": obs["E_total"],
        "s_tilde": gauge_grid.s_tilde if gauge_grid is not None else 0.0,
    }
    return row, wf


def _sweep_point_isolated(payload):
    text, key, value = payload
    from .config import parse_config_text

    cfg = parse_config_text(text)
    row, _ = _sweep_point(cfg, key, value)
    return row


def cmd_sweep(args, cfg: RunConfig) -> int:
    outdir = _outdir(args)
    key = cfg["sweep.key"]
    values = cfg["sweep.values"]
    if not values:
        from .config import ConfigIssue

        raise ConfigError([ConfigIssue("MissingKey", "sweep.values", 0,
                                       "sweep needs a list of values")])
    rows = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point_isolated,
                                 [(cfg.text, key, v) for v in values]))
    else:
        warm = None
        for v in values:
            row, wf = _sweep_point(cfg, key, v, warm_start=warm)
            warm = wf
            rows.append(row)
            print(f"{key} = {v:g}: rings = {row['n_rings']}, "
                  f"lz = {row['lz_pol'] / HBAR:+.3f} hbar")
    columns = [key, "n_rings", "lz_pol", "mu", "E_total", "s_tilde"]
    fio.write_csv(os.path.join(outdir, "sweep.csv"), columns, rows)
    _write_provenance(outdir, cfg)
    print(f"wrote {os.path.join(outdir, 'sweep.csv')}")
    if args.figures:
        from . import report

        report.save_sweep_figure(os.path.join(outdir, "sweep.png"), rows, key)
        print(f"wrote {os.path.join(outdir, 'sweep.png')}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fibervortex",
        description="Nanofiber evanescent gauge fields and vortex rings in "
                    "toroidal condensates")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("config", help="run configuration file")
        if out:
            sp.add_argument("-o", "--out", default="out", help="output directory")
            sp.add_argument("--figures", action="store_true",
                            help="render matplotlib figures next to the data")

    sp = sub.add_parser("modes", help="solve and list guided HE modes")
    sp.add_argument("config")
    sp.add_argument("--csv", default="", help="also write a CSV table")
    sp.set_defaults(fn=cmd_modes)

    sp = sub.add_parser("field", help="sample the evanescent field (EVF1)")
    common(sp)
    sp.set_defaults(fn=cmd_field)

    sp = sub.add_parser("gauge", help="gauge potential and B field (GAU1)")
    common(sp)
    sp.add_argument("--field", required=False, default="",
                    help="EVF1 field grid from the `field` stage")
    sp.add_argument("--check-curl", action="store_true",
                    help="print the analytic/numeric curl discrepancy")
    sp.set_defaults(fn=cmd_gauge)

    sp = sub.add_parser("groundstate", help="imaginary-time ground state (PSI1)")
    common(sp)
    sp.add_argument("--gauge", default="", help="GAU1 gauge grid")
    sp.set_defaults(fn=cmd_groundstate)

    sp = sub.add_parser("evolve", help="real-time evolution")
    common(sp)
    sp.add_argument("--psi", default="", help="PSI1 checkpoint to start from")
    sp.add_argument("--gauge", default="", help="GAU1 gauge grid")
    sp.set_defaults(fn=cmd_evolve)

    sp = sub.add_parser("detect", help="vortex cores, rings, Sobel map")
    common(sp)
    sp.add_argument("--psi", default="", help="PSI1 checkpoint to analyse")
    sp.add_argument("--isosurface", type=float, default=0.0,
                    help="export a triangle mesh at this Sobel fraction")
    sp.set_defaults(fn=cmd_detect)

    sp = sub.add_parser("scissors", help="tilt protocol and frequency fit")
    common(sp)
    sp.add_argument("--psi", default="", help="PSI1 ground state")
    sp.add_argument("--gauge", default="", help="GAU1 gauge grid")
    sp.add_argument("--n-modes", type=int, default=0, choices=(0, 1, 2),
                    help="override scissors.n_modes")
    sp.set_defaults(fn=cmd_scissors)

    sp = sub.add_parser("sweep", help="sweep one config key, aggregate a summary")
    common(sp)
    sp.add_argument("--jobs", type=int, default=1,
                    help="run points in parallel processes (no warm start)")
    sp.set_defaults(fn=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error(s):\n{exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(args, cfg)
    except MissingUpstream as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UPSTREAM
    except ConfigError as exc:
        print(f"config error(s):\n{exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (gpe.NaNDetected, gpe.NoConvergence, sci.FitRejected,
            fib.NoModeFound, gau.GridTooCoarse) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

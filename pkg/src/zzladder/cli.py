"""Command-line front end.

Subcommands: ed, sweep, fidelity-cut, fss, meanfield, gutzwiller, micro,
dump-operator.  Every run takes an optional TOML config file; command-line
flags override config keys.  Exit codes: 0 success, 2 configuration error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import gutzwiller as gutz
from . import meanfield as mf
from . import micro
from .basis import build_sector
from .eigensolver import ConvergenceError
from .hamiltonian import build_boson, dump_operator
from .sweep import (ConfigError, RunConfig, finite_size_scan, grid_points,
                    loglog_slope, peak_positions, report_csv_rows, run_cut,
                    run_point, run_sweep, write_csv, write_json)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    flat = {}
    for key, value in data.items():
        if isinstance(value, dict):  # nested tables: [model], [sweep], [output]
            flat.update(value)
        else:
            flat[key] = value
    return flat


_GRID_KEYS = {"g_grid", "eta_grid", "L_list"}


def _build_runconfig(args: argparse.Namespace) -> RunConfig:
    cfg = dict(_load_config(getattr(args, "config", None)))
    for key in ("L", "N", "boundary", "J", "g", "eta", "seed", "threads",
                "out", "fmt", "axis", "prominence"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    for key in _GRID_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
        if key in cfg and isinstance(cfg[key], list):
            cfg[key] = tuple(cfg[key])
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**cfg)


def _outdir(config: RunConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(config: RunConfig, name: str, rows: list[dict], columns=None,
          payload: dict | None = None):
    out = _outdir(config)
    header = config.header()
    if config.fmt in ("csv", "both"):
        write_csv(out / f"{name}.csv", rows, header, columns)
    if config.fmt in ("json", "both"):
        write_json(out / f"{name}.json", payload or {"rows": rows}, header)


# --- subcommands --------------------------------------------------------------

def cmd_ed(args) -> int:
    config = _build_runconfig(args)
    report, spec = run_point(config)
    rows = report_csv_rows(report, config.run_id())
    _emit(config, "point", rows,
          columns=["run_id", "schema_version", "g", "eta", "L", "N", "boundary",
                   "observable", "index", "value"],
          payload=report.to_json_dict())
    print(f"E0 = {spec.ground_energy:.12f}  multiplet_dim = {spec.multiplet_dim}  "
          f"out = {_outdir(config)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _build_runconfig(args)
    data = run_sweep(config)
    cols = ["g", "eta", "energy", "multiplet_dim", "corr_nn_re", "corr_nn_im",
            "corr_nnn_re", "corr_nnn_im", "current_nnn_paper_A",
            "current_nnn_continuity_A", "chi", "fidelity_g", "fidelity_eta"]
    _emit(config, "sweep", data["rows"], columns=cols)
    _emit(config, "sweep_peaks", data["peaks"],
          columns=["axis", "g", "eta", "height"])
    print(f"{len(data['rows'])} points -> {_outdir(config)}")
    return EXIT_OK


def cmd_fidelity_cut(args) -> int:
    config = _build_runconfig(args)
    cut = run_cut(config)
    peaks = peak_positions(cut["fidelity"], config.prominence)
    _emit(config, "cut_points", cut["points"])
    _emit(config, "cut_fidelity", cut["fidelity"],
          columns=["axis", "lambda_mid", "fidelity", "multiplet_a", "multiplet_b"])
    _emit(config, "cut_peaks",
          [{"axis": cut["axis"], **p} for p in peaks],
          columns=["axis", "position", "height", "prominence"])
    if args.fit_scaling:
        lam = np.array([r[cut["axis"]] for r in cut["points"]])
        cur = np.array([r["current_nnn_paper_A"] for r in cut["points"]])
        slope, intercept = loglog_slope(lam, cur)
        _emit(config, "cut_scaling_fit",
              [{"axis": cut["axis"], "slope": slope, "intercept": intercept}],
              columns=["axis", "slope", "intercept"])
    for p in peaks:
        print(f"peak at {cut['axis']} = {p['position']:.4f} (height {p['height']:.3f})")
    return EXIT_OK


def cmd_fss(args) -> int:
    config = _build_runconfig(args)
    data = finite_size_scan(config)
    _emit(config, "fss_peaks", data["peaks"],
          columns=["L", "peak_index", "position", "height", "prominence"])
    fit_rows = [{k: v for k, v in f.items() if k != "positions"}
                for f in data["fits"]]
    _emit(config, "fss_fit", fit_rows,
          columns=["peak_index", "slope", "intercept", "residual"])
    for f in data["fits"]:
        print(f"peak {f['peak_index']}: extrapolation {f['intercept']:.4f} "
              f"(slope {f['slope']:.3f})")
    return EXIT_OK


def cmd_meanfield(args) -> int:
    config = _build_runconfig(args)
    gs = grid_points(config.g_grid) if args.g_list is None else np.asarray(args.g_list)
    ks = np.linspace(-math.pi, math.pi, args.nk)
    band_rows, folded_rows = [], []
    for g in gs:
        model = mf.BlochModel(g=float(g), J=config.J, eta=config.eta)
        lo, hi = mf.bands(model, ks)
        ef = mf.fermi_level(model)
        for k, a, b in zip(ks, lo, hi):
            band_rows.append({"g": float(g), "k": float(k), "e_lower": float(a),
                              "e_upper": float(b), "e_fermi": ef})
        kf = np.linspace(-math.pi / 2, math.pi / 2, args.nk // 2)
        branches = mf.folded_bands(model, kf)
        for i, k in enumerate(kf):
            folded_rows.append({
                "g": float(g), "k": float(k),
                "e1": float(branches[0, i]), "e2": float(branches[1, i]),
                "e3": float(branches[2, i]), "e4": float(branches[3, i]),
            })
    _emit(config, "mf_bands", band_rows,
          columns=["g", "k", "e_lower", "e_upper", "e_fermi"])
    _emit(config, "mf_folded", folded_rows,
          columns=["g", "k", "e1", "e2", "e3", "e4"])
    g_star = mf.folded_crossing(args.cross_min, args.cross_max, J=config.J)
    _emit(config, "mf_crossing",
          [{"g_min": args.cross_min, "g_max": args.cross_max,
            "found": g_star is not None,
            "g_star": float("nan") if g_star is None else g_star}],
          columns=["g_min", "g_max", "found", "g_star"])
    dens = mf.realspace_density(mf.BlochModel(g=config.g, J=config.J), config.L,
                                config.boundary)
    _emit(config, "mf_density",
          [{"g": config.g, "site": j, "density": float(d)}
           for j, d in enumerate(dens)],
          columns=["g", "site", "density"])
    if g_star is not None:
        print(f"folded crossing at g* = {g_star:.5f}")
    else:
        print("no folded crossing in range")
    return EXIT_OK


def cmd_gutzwiller(args) -> int:
    config = _build_runconfig(args)
    params = config.params(boundary="pbc", g=config.g, eta=config.eta)
    gs = grid_points(config.g_grid) if args.scan else [config.g]
    rows = gutz.epsilon_scan(params, gs, variant=args.variant,
                             restarts=args.restarts, seed=config.seed)
    _emit(config, "gutzwiller", rows,
          columns=["g", "eta", "variant", "epsilon", "theta", "phi", "energy",
                   "chi"])
    best = rows[-1] if not args.scan else max(rows, key=lambda r: abs(r["epsilon"]))
    if args.contour:
        res = gutz.optimize(params, variant=args.variant,
                            restarts=args.restarts, seed=config.seed)
        theta0 = res.config.theta
        eps_grid = np.linspace(-0.45, 0.45, args.contour_n)
        phi_grid = np.linspace(-math.pi / 2, math.pi / 2, args.contour_n)
        contour_rows = []
        for e in eps_grid:
            for ph in phi_grid:
                cfg = gutz.GutzwillerConfig(epsilon=float(e), theta=theta0,
                                            phi=float(ph), L=params.L,
                                            variant=args.variant)
                contour_rows.append({"g": params.g, "eta": params.eta,
                                     "theta": theta0, "epsilon": float(e),
                                     "phi": float(ph),
                                     "energy": gutz.energy(cfg, params),
                                     "chi": gutz.chi_of_config(cfg)})
        _emit(config, "gutzwiller_contour", contour_rows,
              columns=["g", "eta", "theta", "epsilon", "phi", "energy", "chi"])
    print(f"optimum near eps = {best['epsilon']:+.4f}, theta = {best['theta']:+.4f}, "
          f"phi = {best['phi']:+.4f}")
    return EXIT_OK


def cmd_micro(args) -> int:
    config = _build_runconfig(args)
    scheme = micro.default_level_scheme()
    setup = micro.TriangleSetup(alpha=args.alpha)
    j_scale = micro.energy_scale(setup, scheme)
    h123 = micro.indirect_hop(setup, 0, 1, 2, scheme)
    element_rows = [
        {"bra": b, "component": c, "ket": k, "value": scheme.element(b, c, k)}
        for (b, c, k) in (("0", "-", "+"), ("1", "-", "0"),
                          ("0", "+", "1"), ("+", "+", "0"))
    ]
    _emit(config, "micro_dipoles", element_rows,
          columns=["bra", "component", "ket", "value"])
    deltas = np.geomspace(args.delta_min, args.delta_max, args.n_delta)
    scan = micro.elimination_error_scan(deltas, alpha=args.alpha)
    _emit(config, "micro_elimination", scan,
          columns=["delta_over_J", "g", "error_over_J"])
    slope, _ = loglog_slope(np.array([r["delta_over_J"] for r in scan]),
                            np.array([r["error_over_J"] for r in scan]))
    payload = {
        "J": j_scale,
        "h_1_2_3": {"re": h123.real, "im": h123.imag,
                    "abs_over_J2": abs(h123) / j_scale ** 2,
                    "phase_over_alpha": (np.angle(h123) / -4 / args.alpha
                                         if args.alpha else float("nan"))},
        "g_of_delta": [{"delta_over_J": float(d), "g": 27.0 / (2 * float(d))}
                       for d in deltas],
        "elimination_slope": slope,
        "levels": {lbl: vars(scheme.state(lbl)) for lbl in ("0", "1", "+")},
    }
    write_json(_outdir(config) / "micro.json", payload, config.header())
    print(f"J = {j_scale:.6g}, |h|/J^2 = {abs(h123) / j_scale**2:.6f}, "
          f"elimination slope = {slope:+.3f}")
    return EXIT_OK


def cmd_dump_operator(args) -> int:
    config = _build_runconfig(args)
    params = config.params()
    sector = build_sector(params.L, params.N)
    op = build_boson(params, sector)
    out = _outdir(config) / f"operator_{config.run_id()}.npz"
    dump_operator(op, out)
    print(f"dim = {op.dim}, stored nnz = {op.nnz} -> {out}")
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zzladder",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--L", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--g", type=float)
        p.add_argument("--eta", type=float)
        p.add_argument("--J", type=float)
        p.add_argument("--boundary", choices=["pbc", "obc"])
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--out")
        p.add_argument("--format", dest="fmt", choices=["csv", "json", "both"])
        p.add_argument("--g-grid", dest="g_grid", type=float, nargs=3,
                       metavar=("MIN", "MAX", "STEP"))
        p.add_argument("--eta-grid", dest="eta_grid", type=float, nargs=3,
                       metavar=("MIN", "MAX", "STEP"))
        p.add_argument("--prominence", type=float)

    p = sub.add_parser("ed", help="single-point exact diagonalization")
    common(p)
    p.set_defaults(func=cmd_ed)

    p = sub.add_parser("sweep", help="Cartesian (g, eta) sweep")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fidelity-cut", help="1D cut with fidelity peaks")
    common(p)
    p.add_argument("--axis", choices=["g", "eta"])
    p.add_argument("--fit-scaling", action="store_true",
                   help="also fit log|I| against log(axis)")
    p.set_defaults(func=cmd_fidelity_cut)

    p = sub.add_parser("fss", help="finite-size scan of fidelity peaks")
    common(p)
    p.add_argument("--axis", choices=["g", "eta"])
    p.add_argument("--L-list", dest="L_list", type=int, nargs="+")
    p.set_defaults(func=cmd_fss)

    p = sub.add_parser("meanfield", help="bands, folding, crossing, density")
    common(p)
    p.add_argument("--g-list", type=float, nargs="+")
    p.add_argument("--nk", type=int, default=512)
    p.add_argument("--cross-min", type=float, default=0.05)
    p.add_argument("--cross-max", type=float, default=0.9)
    p.set_defaults(func=cmd_meanfield)

    p = sub.add_parser("gutzwiller", help="variational optimum and scans")
    common(p)
    p.add_argument("--variant", choices=list(gutz.VARIANTS), default="symmetric")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--scan", action="store_true", help="scan the g grid")
    p.add_argument("--contour", action="store_true",
                   help="emit an E(eps, phi) grid at the optimal theta")
    p.add_argument("--contour-n", type=int, default=41)
    p.set_defaults(func=cmd_gutzwiller)

    p = sub.add_parser("micro", help="dipole elements, triangle, elimination scan")
    common(p)
    p.add_argument("--alpha", type=float, default=math.pi / 3)
    p.add_argument("--delta-min", type=float, default=500.0)
    p.add_argument("--delta-max", type=float, default=5000.0)
    p.add_argument("--n-delta", type=int, default=9)
    p.set_defaults(func=cmd_micro)

    p = sub.add_parser("dump-operator", help="binary dump of the sector operator")
    common(p)
    p.set_defaults(func=cmd_dump_operator)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

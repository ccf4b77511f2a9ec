"""Parameter sweeps, fidelity cuts, finite-size scans, and persistent outputs.

H(g, eta) = A + g B + g eta C, so grids over (g, eta) reuse one set of
sparse parts per (L, N, boundary).  Sweeps warm-start each solve from the
previous ground vector.  Fidelity along a scan axis is the subspace overlap
between (near-)degenerate ground multiplets of adjacent grid points, which
reduces to the plain |<a|b>| susceptibility whenever the ground state is
unique.

All files are deterministic: float cells use repr round-tripping, headers
carry the full configuration, and the run id is a hash of it.  Re-running
the same configuration reproduces every byte.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .basis import BasisSector, ModelParams, build_sector
from .eigensolver import SpectralResult, lanczos_ground
from .hamiltonian import HamiltonianParts, SparseOperator, build_parts
from .observables import (ObservableReport, compute_report, corr1,
                          current_nnn, fidelity_subspace)

SCHEMA_VERSION = 1

DEFAULT_G_GRID = (0.0, 3.0, 0.025)
DEFAULT_ETA_GRID = (0.0, 10.0, 0.25)
DEFAULT_L_LIST = (12, 16, 20)
DEFAULT_PROMINENCE = 0.05  # relative to the curve maximum


class ConfigError(ValueError):
    """Bad run configuration (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Declarative description of one run; flags override file keys upstream."""

    L: int = 12
    N: int = -1
    boundary: str = "pbc"
    J: float = 1.0
    g: float = 0.5
    eta: float = 1.0
    g_grid: tuple = DEFAULT_G_GRID          # (min, max, step)
    eta_grid: tuple = DEFAULT_ETA_GRID
    L_list: tuple = DEFAULT_L_LIST
    axis: str = "g"
    seed: int = 0
    threads: int = 1
    out: str = "runs"
    fmt: str = "csv"
    prominence: float = DEFAULT_PROMINENCE
    cache_operators: bool = False

    def params(self, **overrides) -> ModelParams:
        kw = {"L": self.L, "N": self.N, "g": self.g, "eta": self.eta,
              "J": self.J, "boundary": self.boundary}
        kw.update(overrides)
        try:
            return ModelParams(**kw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def run_id(self) -> str:
        physics = {k: v for k, v in self.__dict__.items()
                   if k not in ("out", "fmt", "threads")}
        blob = json.dumps(physics, sort_keys=True, default=str)
        return hashlib.sha1(blob.encode()).hexdigest()[:12]

    def header(self) -> dict:
        return {"run_id": self.run_id(), "schema_version": SCHEMA_VERSION,
                **{k: v for k, v in self.__dict__.items()}}


def grid_points(spec) -> np.ndarray:
    """Materialize a (min, max, step) triple or an explicit list of values."""
    if isinstance(spec, (list, np.ndarray)) and not (
            len(spec) == 3 and np.isscalar(spec[2]) and not isinstance(spec, np.ndarray)):
        arr = np.asarray(spec, dtype=float)
        if arr.size == 0:
            raise ConfigError("empty grid")
        return arr
    lo, hi, step = spec
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad grid spec {spec}")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


# --- solving -----------------------------------------------------------------

@dataclass
class SectorWorkspace:
    """Reusable pieces for one (L, N, boundary, J)."""

    sector: BasisSector
    parts: HamiltonianParts

    @classmethod
    def create(cls, params: ModelParams) -> "SectorWorkspace":
        sector = build_sector(params.L, params.N)
        return cls(sector=sector, parts=build_parts(params, sector))

    def solve(self, g: float, eta: float, seed: int = 0,
              v0: np.ndarray | None = None, k: int = 1
              ) -> tuple[SparseOperator, SpectralResult]:
        op = self.parts.combine(g, eta)
        return op, lanczos_ground(op, k=k, seed=seed, v0=v0)


def run_point(config: RunConfig) -> tuple[ObservableReport, SpectralResult]:
    """Build, solve and measure a single parameter point."""
    params = config.params()
    ws = SectorWorkspace.create(params)
    op, spec = ws.solve(params.g, params.eta, seed=config.seed)
    if config.cache_operators:
        from pathlib import Path

        from .hamiltonian import dump_operator

        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        dump_operator(op, out / f"operator_{config.run_id()}.npz")
    report = compute_report(
        params, ws.sector, spec.ground_vector, spec.ground_energy,
        multiplet=spec.ground_multiplet(),
        meta={"run_id": config.run_id(), "seed": config.seed,
              "multiplet_open": spec.multiplet_open},
    )
    return report, spec


# --- scalar summaries used by sweeps ----------------------------------------

def _chain_a_mean(values: np.ndarray, bonds: list[int]) -> float:
    vals = [v for v, j in zip(values, bonds) if j % 2 == 0]
    return float(np.mean(vals))


def point_row(params: ModelParams, sector: BasisSector,
              spec: SpectralResult) -> dict:
    """Scalar per-point summary: energy, bulk correlations, chain-A currents."""
    psi = spec.ground_vector
    c1 = corr1(psi, sector)
    L = params.L
    nn_re, nn_im, nnn_re, nnn_im = [], [], [], []
    for j in range(L if params.pbc else L - 1):
        z = c1[(j + 1) % L, j]
        nn_re.append(z.real)
        nn_im.append(z.imag)
    for j in range(0, L if params.pbc else L - 2, 2):
        z = c1[(j + 2) % L, j]
        nnn_re.append(z.real)
        nnn_im.append(z.imag)
    bonds = list(range(0, L if params.pbc else L - 2, 2))
    i_paper = [current_nnn(psi, sector, params, j, "paper") for j in bonds]
    i_cont = [current_nnn(psi, sector, params, j, "continuity") for j in bonds]
    chi = float("nan")
    if not params.pbc and params.L >= 9:
        from .observables import chi_order
        chi = chi_order(psi, sector, params)
    return {
        "g": params.g, "eta": params.eta, "energy": spec.ground_energy,
        "multiplet_dim": spec.multiplet_dim,
        "corr_nn_re": float(np.mean(nn_re)), "corr_nn_im": float(np.mean(nn_im)),
        "corr_nnn_re": float(np.mean(nnn_re)), "corr_nnn_im": float(np.mean(nnn_im)),
        "current_nnn_paper_A": float(np.mean(i_paper)),
        "current_nnn_continuity_A": float(np.mean(i_cont)),
        "chi": chi,
    }


# --- sweeps ------------------------------------------------------------------

def run_cut(config: RunConfig, axis: str | None = None,
            collect_vectors: bool = False) -> dict:
    """1D scan along g or eta; fidelity between adjacent ground multiplets."""
    axis = axis or config.axis
    if axis not in ("g", "eta"):
        raise ConfigError(f"axis must be 'g' or 'eta', got {axis!r}")
    grid = grid_points(config.g_grid if axis == "g" else config.eta_grid)
    params0 = config.params(g=float(grid[0]) if axis == "g" else config.g,
                            eta=float(grid[0]) if axis == "eta" else config.eta)
    ws = SectorWorkspace.create(params0)
    rows, multiplets, vectors = [], [], []
    v0 = None
    for lam in grid:
        g = float(lam) if axis == "g" else config.g
        eta = float(lam) if axis == "eta" else config.eta
        _, spec = ws.solve(g, eta, seed=config.seed, v0=v0)
        v0 = spec.ground_vector
        params = config.params(g=g, eta=eta)
        rows.append(point_row(params, ws.sector, spec))
        multiplets.append(spec.ground_multiplet())
        if collect_vectors:
            vectors.append(spec.ground_vector)
    dlam = float(grid[1] - grid[0]) if len(grid) > 1 else 0.0
    fid_rows = []
    for i in range(len(grid) - 1):
        f = fidelity_subspace(multiplets[i], multiplets[i + 1], dlam, params0.N)
        fid_rows.append({
            "axis": axis, "lambda_mid": float(0.5 * (grid[i] + grid[i + 1])),
            "fidelity": f,
            "multiplet_a": multiplets[i].shape[1],
            "multiplet_b": multiplets[i + 1].shape[1],
        })
    out = {"grid": grid, "points": rows, "fidelity": fid_rows, "axis": axis,
           "sector": ws.sector, "dlam": dlam}
    if collect_vectors:
        out["vectors"] = vectors
    return out


def peak_positions(fid_rows: list[dict], prominence_rel: float = DEFAULT_PROMINENCE
                   ) -> list[dict]:
    """Local fidelity maxima above a relative prominence, parabolically refined."""
    if not fid_rows:
        return []
    lam = np.array([r["lambda_mid"] for r in fid_rows])
    f = np.array([r["fidelity"] for r in fid_rows])
    if len(f) < 3:
        return []
    idx, props = find_peaks(f, prominence=prominence_rel * float(f.max()))
    peaks = []
    for n, i in enumerate(idx):
        pos = float(lam[i])
        if 0 < i < len(f) - 1:
            denom = f[i - 1] - 2 * f[i] + f[i + 1]
            if denom != 0.0:
                pos += 0.5 * (f[i - 1] - f[i + 1]) / denom * float(lam[1] - lam[0])
        peaks.append({"position": pos, "height": float(f[i]),
                      "prominence": float(props["prominences"][n])})
    return peaks


def run_sweep(config: RunConfig) -> dict:
    """Cartesian (g, eta) grid with fidelity along both axes."""
    g_grid = grid_points(config.g_grid)
    eta_grid = grid_points(config.eta_grid)
    params0 = config.params(g=float(g_grid[0]), eta=float(eta_grid[0]))
    ws = SectorWorkspace.create(params0)
    dg = float(g_grid[1] - g_grid[0]) if len(g_grid) > 1 else 0.0
    deta = float(eta_grid[1] - eta_grid[0]) if len(eta_grid) > 1 else 0.0
    rows = []
    prev_row_multiplets: list | None = None
    for eta in eta_grid:
        this_row_multiplets = []
        v0 = None
        row_multiplet_prev_g = None
        for gi, g in enumerate(g_grid):
            _, spec = ws.solve(float(g), float(eta), seed=config.seed, v0=v0)
            v0 = spec.ground_vector
            params = config.params(g=float(g), eta=float(eta))
            row = point_row(params, ws.sector, spec)
            mult = spec.ground_multiplet()
            row["fidelity_g"] = (
                fidelity_subspace(row_multiplet_prev_g, mult, dg, params.N)
                if row_multiplet_prev_g is not None and dg > 0 else float("nan"))
            row["fidelity_eta"] = (
                fidelity_subspace(prev_row_multiplets[gi], mult, deta, params.N)
                if prev_row_multiplets is not None and deta > 0 else float("nan"))
            rows.append(row)
            row_multiplet_prev_g = mult
            if deta > 0 and len(eta_grid) > 1:
                this_row_multiplets.append(mult)
        prev_row_multiplets = this_row_multiplets or None
    return {"rows": rows, "g_grid": g_grid, "eta_grid": eta_grid,
            "peaks": sweep_peak_markers(rows, g_grid, eta_grid,
                                        config.prominence)}


def sweep_peak_markers(rows, g_grid, eta_grid, prominence) -> list[dict]:
    """Fidelity-peak markers for the (g, eta) plane, one row per peak.

    Horizontal cuts (scan along g at fixed eta) and vertical cuts (along eta
    at fixed g), matching the phase-diagram overlay.
    """
    markers = []
    by_eta = {}
    by_g = {}
    for r in rows:
        by_eta.setdefault(r["eta"], []).append(r)
        by_g.setdefault(r["g"], []).append(r)
    dg = float(g_grid[1] - g_grid[0]) if len(g_grid) > 1 else 0.0
    deta = float(eta_grid[1] - eta_grid[0]) if len(eta_grid) > 1 else 0.0
    if dg > 0:
        for eta, rr in sorted(by_eta.items()):
            fid = [{"lambda_mid": r["g"] - dg / 2, "fidelity": r["fidelity_g"]}
                   for r in rr if not math.isnan(r["fidelity_g"])]
            for p in peak_positions(fid, prominence):
                markers.append({"axis": "g", "g": p["position"], "eta": eta,
                                "height": p["height"]})
    if deta > 0:
        for g, rr in sorted(by_g.items()):
            fid = [{"lambda_mid": r["eta"] - deta / 2, "fidelity": r["fidelity_eta"]}
                   for r in rr if not math.isnan(r["fidelity_eta"])]
            for p in peak_positions(fid, prominence):
                markers.append({"axis": "eta", "g": g, "eta": p["position"],
                                "height": p["height"]})
    return markers


def finite_size_scan(config: RunConfig, L_list=None) -> dict:
    """Repeat a cut at several L and fit peak positions linearly in 1/L."""
    L_list = list(L_list or config.L_list)
    if len(L_list) < 2:
        raise ConfigError("finite-size scan needs at least two system sizes")
    per_l = {}
    peak_rows = []
    for L in L_list:
        cfg = replace(config, L=L, N=-1)
        cut = run_cut(cfg)
        peaks = peak_positions(cut["fidelity"], config.prominence)
        per_l[L] = {"cut": cut, "peaks": peaks}
        for i, p in enumerate(peaks):
            peak_rows.append({"L": L, "peak_index": i, **p})
    n_peaks = min(len(per_l[L]["peaks"]) for L in L_list)
    fits = []
    for i in range(n_peaks):
        inv_l = np.array([1.0 / L for L in L_list])
        pos = np.array([per_l[L]["peaks"][i]["position"] for L in L_list])
        coeff, residuals, *_ = np.polyfit(inv_l, pos, 1, full=True)
        fits.append({
            "peak_index": i, "slope": float(coeff[0]),
            "intercept": float(coeff[1]),
            "residual": float(residuals[0]) if len(residuals) else 0.0,
            "positions": {int(L): float(p) for L, p in zip(L_list, pos)},
        })
    return {"per_L": per_l, "peaks": peak_rows, "fits": fits, "L_list": L_list}


def loglog_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """(slope, intercept) of log|y| against log x."""
    x = np.asarray(x, float)
    y = np.abs(np.asarray(y, float))
    if np.any(y <= 0):
        raise ValueError("log-log fit needs nonzero values")
    coeff = np.polyfit(np.log(x), np.log(y), 1)
    return float(coeff[0]), float(coeff[1])


# --- persistence -------------------------------------------------------------

def _fmt_cell(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def write_csv(path, rows: list[dict], header: dict, columns: list[str] | None = None):
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    lines = [f"# {k} = {header[k]}" for k in sorted(header)]
    lines.append(",".join(columns))
    for r in rows:
        lines.append(",".join(_fmt_cell(r.get(c, "")) for c in columns))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> tuple[dict, list[dict]]:
    meta, rows, columns = {}, [], None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                k, _, v = line[1:].partition("=")
                meta[k.strip()] = v.strip()
                continue
            if columns is None:
                columns = line.split(",")
                continue
            cells = line.split(",")
            row = {}
            for c, cell in zip(columns, cells):
                try:
                    row[c] = int(cell)
                except ValueError:
                    try:
                        row[c] = float(cell)
                    except ValueError:
                        row[c] = cell
            rows.append(row)
    return meta, rows


def write_json(path, payload: dict, header: dict):
    with open(path, "w") as fh:
        json.dump({"header": header, **payload}, fh, sort_keys=True, indent=1,
                  default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def report_csv_rows(report: ObservableReport, run_id: str) -> list[dict]:
    """Flat rows: one per site/bond/plaquette/distance observable value."""
    p = report.params
    base = {"run_id": run_id, "schema_version": SCHEMA_VERSION, "g": p.g,
            "eta": p.eta, "L": p.L, "N": p.N, "boundary": p.boundary}
    rows = []

    def emit(observable, index, value):
        rows.append({**base, "observable": observable, "index": index,
                     "value": float(value)})

    for j, v in enumerate(report.density):
        emit("density", j, v)
    for d, v in enumerate(report.g2):
        emit("g2", d, v)
    if report.g2_multiplet is not None:
        for d, v in enumerate(report.g2_multiplet):
            emit("g2_multiplet", d, v)
    for j, v in zip(report.nn_bonds, report.current_nn_paper):
        emit("current_nn_paper", j, v)
    for j, v in zip(report.nn_bonds, report.current_nn_continuity):
        emit("current_nn_continuity", j, v)
    for j, v in zip(report.nnn_bonds, report.current_nnn_paper):
        emit("current_nnn_paper", j, v)
    for j, v in zip(report.nnn_bonds, report.current_nnn_continuity):
        emit("current_nnn_continuity", j, v)
    for j, v in zip(report.plaquettes, report.flux_mean):
        emit("flux_mean", j, v)
    for j, v in zip(report.plaquettes, report.flux_var):
        emit("flux_var", j, v)
    for k in range(p.L):
        for l in range(p.L):
            emit("corr1_re", k * p.L + l, report.corr1[k, l].real)
            emit("corr1_im", k * p.L + l, report.corr1[k, l].imag)
    if report.chi is not None:
        emit("chi", 0, report.chi)
    if report.fidelity is not None:
        emit("fidelity", 0, report.fidelity)
    emit("energy", 0, report.energy)
    return rows

"""Site-factorized variational states with a four-site unit cell.

Each site carries (1 -+ eps)|0> + (1 +- eps) e^{i chi}|1> (normalized); theta
distinguishes the sub-chains, phi is the phase picked up along a sub-chain,
eps tilts the density.  The "symmetric" variant arranges the weights so the
fourth site mirrors the first, giving the period-4 density pattern
(hi, lo, lo, hi); "paper-literal" keeps the published fourth line, whose
|1>-weight reads (1 - eps) instead.

For a product state every Hamiltonian term factorizes into on-site
expectations, so the energy is a closed-form sum over one unit cell; the
full-vector contraction at small L reproduces it to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .basis import ModelParams
from .hamiltonian import build_terms

VARIANTS = ("symmetric", "paper-literal")


@dataclass(frozen=True)
class GutzwillerConfig:
    epsilon: float
    theta: float
    phi: float
    L: int
    variant: str = "symmetric"

    def __post_init__(self):
        if abs(self.epsilon) >= 1:
            raise ValueError("epsilon must satisfy |epsilon| < 1")
        if self.L % 4:
            raise ValueError("L must be a multiple of 4")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class SiteAmplitudes:
    """Normalized per-site amplitudes: a|0> + b e^{i chi}|1> with a, b >= 0."""

    a: np.ndarray
    b: np.ndarray
    chi: np.ndarray

    @property
    def occupation(self) -> np.ndarray:
        return self.b ** 2

    @property
    def b_expect(self) -> np.ndarray:
        """<b_j> = a_j b_j e^{i chi_j}."""
        return self.a * self.b * np.exp(1j * self.chi)


def build_state(config: GutzwillerConfig) -> SiteAmplitudes:
    eps, th, ph = config.epsilon, config.theta, config.phi
    cell = [
        (1 - eps, 1 + eps, th - ph),
        (1 + eps, 1 - eps, -(th - ph)),
        (1 + eps, 1 - eps, th + ph),
        (1 - eps, (1 - eps) if config.variant == "paper-literal" else (1 + eps),
         -(th + ph)),
    ]
    a = np.empty(config.L)
    b = np.empty(config.L)
    chi = np.empty(config.L)
    for j in range(config.L):
        wa, wb, c = cell[j % 4]
        norm = math.hypot(wa, wb)
        a[j], b[j], chi[j] = wa / norm, wb / norm, c
    return SiteAmplitudes(a=a, b=b, chi=chi)


def energy_from_amplitudes(site: SiteAmplitudes, params: ModelParams) -> float:
    """<H> on an arbitrary product state, term by factorized term."""
    if not params.pbc:
        raise ValueError("variational energy assumes PBC (clean unit-cell tiling)")
    terms = build_terms(params)
    bexp = site.b_expect
    n = site.occupation
    hole = 1.0 - n
    e = 0.0
    for t in range(len(terms.src)):
        amp = terms.coef[t]
        if terms.group[t]:
            amp = amp * params.g
        val = amp * np.conj(bexp[terms.tgt[t]]) * bexp[terms.src[t]]
        if terms.cond[t] >= 0:
            val *= hole[terms.cond[t]]
        e += 2.0 * val.real  # + h.c.
    diag = sum(n[j] * hole[k] for j, k in terms.diag_pairs)
    e += -2.0 * params.g * params.eta * params.J * diag
    return float(e)


def energy(config: GutzwillerConfig, params: ModelParams) -> float:
    if params.L != config.L:
        raise ValueError("config and params disagree on L")
    return energy_from_amplitudes(build_state(config), params)


def chi_of_config(config: GutzwillerConfig) -> float:
    """Staggered flux order parameter on the product state (PBC, via densities)."""
    n = build_state(config).occupation
    L = config.L
    flux = np.array([
        -(math.pi / 3) * (n[(j + 2) % L] + n[(j + 1) % L]
                          - n[(j - 1) % L] - n[(j + 4) % L])
        for j in range(L)
    ])
    total = sum((-1) ** (j // 2) * (flux[j] + flux[j + 1]) for j in range(0, L, 2))
    return abs(total) / L


@dataclass
class OptimizeResult:
    config: GutzwillerConfig
    energy: float
    minima: list[tuple[GutzwillerConfig, float]]
    n_converged: int


def optimize(params: ModelParams, variant: str = "symmetric", restarts: int = 32,
             seed: int = 0, L: int | None = None) -> OptimizeResult:
    """Multi-start Nelder-Mead over (eps, theta, phi); degenerate +- pairs expected."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    L = L or params.L
    rng = np.random.default_rng(seed)

    def objective(x):
        cfg = GutzwillerConfig(epsilon=float(np.clip(x[0], -0.95, 0.95)),
                               theta=float(x[1]), phi=float(x[2]), L=L,
                               variant=variant)
        return energy(cfg, replace(params, L=L, N=L // 2))

    starts = [np.zeros(3)]
    for _ in range(restarts - 1):
        starts.append(np.array([rng.uniform(-0.9, 0.9),
                                rng.uniform(-np.pi, np.pi),
                                rng.uniform(-np.pi, np.pi)]))
    minima: list[tuple[GutzwillerConfig, float]] = []
    n_ok = 0
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 4000})
        if not res.success:
            continue
        n_ok += 1
        cfg = GutzwillerConfig(epsilon=float(np.clip(res.x[0], -0.95, 0.95)),
                               theta=_wrap_angle(res.x[1]),
                               phi=_wrap_angle(res.x[2]), L=L, variant=variant)
        if not any(abs(res.fun - e0) < 1e-9
                   and abs(cfg.epsilon - c0.epsilon) < 1e-4
                   and abs(_wrap_angle(cfg.phi - c0.phi)) < 1e-4
                   for c0, e0 in minima):
            minima.append((cfg, float(res.fun)))
    if not minima:
        raise RuntimeError("no Nelder-Mead restart converged")
    minima.sort(key=lambda ce: ce[1])
    best_cfg, best_e = minima[0]
    return OptimizeResult(config=best_cfg, energy=best_e, minima=minima,
                          n_converged=n_ok)


def _wrap_angle(x: float) -> float:
    """Wrap to (-pi, pi]."""
    y = (float(x) + math.pi) % (2 * math.pi) - math.pi
    return math.pi if y == -math.pi else y


def epsilon_scan(params: ModelParams, g_grid, variant: str = "symmetric",
                 restarts: int = 16, seed: int = 0) -> list[dict]:
    """Optimal (eps, theta, phi, E, chi) per g, with theta and phi re-optimized."""
    rows = []
    for g in g_grid:
        p = replace(params, g=float(g))
        res = optimize(p, variant=variant, restarts=restarts, seed=seed)
        cfg = res.config
        rows.append({
            "g": float(g), "eta": params.eta, "variant": variant,
            "epsilon": cfg.epsilon, "theta": cfg.theta, "phi": cfg.phi,
            "energy": res.energy, "chi": chi_of_config(cfg),
        })
    return rows


def symmetric_curvature(params: ModelParams, variant: str = "symmetric",
                        restarts: int = 8, seed: int = 0, h: float = 1e-4) -> float:
    """Smallest Hessian eigenvalue at the density-symmetric stationary point.

    (theta, phi) are optimized at eps = 0 first; a sign change of the result
    as a function of g locates the bifurcation of eps*(g).
    """
    L = params.L
    rng = np.random.default_rng(seed)

    def e_sym(x):
        cfg = GutzwillerConfig(epsilon=0.0, theta=float(x[0]), phi=float(x[1]),
                               L=L, variant=variant)
        return energy(cfg, params)

    best = None
    for i in range(restarts):
        x0 = np.zeros(2) if i == 0 else rng.uniform(-np.pi, np.pi, 2)
        res = minimize(e_sym, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    x0 = np.array([0.0, best.x[0], best.x[1]])

    def e_full(x):
        cfg = GutzwillerConfig(epsilon=float(x[0]), theta=float(x[1]),
                               phi=float(x[2]), L=L, variant=variant)
        return energy(cfg, params)

    hess = np.zeros((3, 3))
    f0 = e_full(x0)
    for i in range(3):
        for j in range(i, 3):
            ei = np.eye(3)[i] * h
            ej = np.eye(3)[j] * h
            if i == j:
                hess[i, i] = (e_full(x0 + ei) - 2 * f0 + e_full(x0 - ei)) / h ** 2
            else:
                hess[i, j] = hess[j, i] = (
                    e_full(x0 + ei + ej) - e_full(x0 + ei - ej)
                    - e_full(x0 - ei + ej) + e_full(x0 - ei - ej)
                ) / (4 * h ** 2)
    return float(np.linalg.eigvalsh(hess)[0])


def locate_bifurcation(params: ModelParams, g_lo: float, g_hi: float,
                       variant: str = "symmetric", tol: float = 1e-3,
                       restarts: int = 12, seed: int = 0,
                       eps_threshold: float = 1e-3) -> float:
    """Smallest g where the optimal density modulation departs from zero."""
    from dataclasses import replace as _r

    def modulated(g):
        res = optimize(_r(params, g=float(g)), variant=variant,
                       restarts=restarts, seed=seed)
        return abs(res.config.epsilon) > eps_threshold

    lo, hi = g_lo, g_hi
    if modulated(lo) or not modulated(hi):
        raise ValueError(f"bifurcation not bracketed by [{g_lo}, {g_hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if modulated(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)

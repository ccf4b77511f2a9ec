"""Quadratic mean-field model: Bloch matrix, bands, folding, crossing locator.

Uniform half filling replaces the number operators in the second-order
terms, leaving -(1-g)J nearest-neighbour hopping and a pure Peierls phase
-gJ e^{+-4*pi*i/3} along each sub-chain.  With the two-site cell (lattice
constant 1, Fourier sign e^{ikm}) the Bloch matrix is

    [ 2gJ sin(k + pi/6)        -(1-g)J (1 + e^{-ik}) ]
    [ -(1-g)J (1 + e^{ik})     -2gJ sin(k - pi/6)    ]

which reproduces the real-space single-particle spectrum exactly; the two
sub-chain dispersions are shifted copies, so the matrix is not traceless at
fixed k even though the spectrum is symmetric over the zone.  The constant
offset -2*eta*g*J per particle is a chemical-potential shift at fixed N and
is tracked separately, never entering the bands.

Folding into k in [-pi/2, pi/2] (four-site cell) makes the two lowest
sub-bands cross above g* = 1/(1 + sqrt(3)) ~= 0.36603.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BlochModel:
    g: float
    J: float = 1.0
    eta: float = 0.0

    @property
    def offset(self) -> float:
        """Per-particle energy shift from the mean-field density term."""
        return -2.0 * self.eta * self.g * self.J


def bloch_matrix(model: BlochModel, k: float) -> np.ndarray:
    g, J = model.g, model.J
    off = -(1 - g) * J * (1 + np.exp(-1j * k))
    return np.array([
        [2 * g * J * np.sin(k + np.pi / 6), off],
        [np.conj(off), -2 * g * J * np.sin(k - np.pi / 6)],
    ])


def bands(model: BlochModel, ks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(E_lower, E_upper) on the momentum grid, sorted pointwise."""
    ks = np.asarray(ks, dtype=float)
    g, J = model.g, model.J
    da = 2 * g * J * np.sin(ks + np.pi / 6)
    db = -2 * g * J * np.sin(ks - np.pi / 6)
    off2 = (1 - g) ** 2 * J ** 2 * np.abs(1 + np.exp(1j * ks)) ** 2
    half_tr = 0.5 * (da + db)
    disc = np.sqrt(0.25 * (da - db) ** 2 + off2)
    return half_tr - disc, half_tr + disc


def realspace_hamiltonian(model: BlochModel, L: int, boundary: str = "pbc") -> np.ndarray:
    """Single-particle quadratic Hamiltonian on L sites (the dense oracle)."""
    if boundary == "pbc" and L % 2:
        raise ValueError("PBC real-space model needs an even number of sites")
    g, J = model.g, model.J
    h = np.zeros((L, L), dtype=complex)
    for j in range(L):
        targets = [(j + 1, -(1 - g) * J)]
        phase = np.exp(1j * 4 * np.pi / 3) if j % 2 == 0 else np.exp(-1j * 4 * np.pi / 3)
        targets.append((j + 2, -g * J * phase))
        for t, amp in targets:
            if boundary == "pbc":
                h[t % L, j] += amp
            elif t < L:
                h[t, j] += amp
    return h + h.conj().T


def realspace_spectrum(model: BlochModel, L: int, boundary: str = "pbc") -> np.ndarray:
    return np.linalg.eigvalsh(realspace_hamiltonian(model, L, boundary))


def realspace_density(model: BlochModel, L: int, boundary: str = "pbc",
                      filling: float = 0.5) -> np.ndarray:
    """Free-fermion ground-state density at the given filling.

    Degenerate levels straddling the Fermi count are occupied with equal
    fractional weight, keeping the result basis-independent.
    """
    h = realspace_hamiltonian(model, L, boundary)
    w, v = np.linalg.eigh(h)
    nfill = int(round(filling * L))
    weights = np.zeros(L)
    weights[:nfill] = 1.0
    if 0 < nfill < L and abs(w[nfill] - w[nfill - 1]) < 1e-12:
        lo = nfill
        while lo > 0 and abs(w[lo - 1] - w[nfill - 1]) < 1e-12:
            lo -= 1
        hi = nfill
        while hi < L and abs(w[hi] - w[nfill - 1]) < 1e-12:
            hi += 1
        weights[lo:hi] = (nfill - lo) / (hi - lo)
    return (np.abs(v) ** 2) @ weights


def sampled_momenta(L: int) -> np.ndarray:
    """Momentum grid matching a PBC ring of L sites (L/2 two-site cells)."""
    m = L // 2
    return 2 * np.pi * np.arange(m) / m


def fermi_level(model: BlochModel, filling: float = 0.5, nk: int = 4096) -> float:
    """Energy below which the requested fraction of (k, band) states lies."""
    if not 0 < filling < 1:
        raise ValueError("filling must be in (0, 1)")
    ks = 2 * np.pi * np.arange(nk) / nk - np.pi
    lo, hi = bands(model, ks)
    all_e = np.sort(np.concatenate([lo, hi]))
    n_occ = int(round(filling * all_e.size))
    return 0.5 * float(all_e[n_occ - 1] + all_e[n_occ])


def folded_bands(model: BlochModel, ks: np.ndarray) -> np.ndarray:
    """Four folded branches over k in [-pi/2, pi/2]: E-(k), E-(k+pi), E+(k), E+(k+pi)."""
    lo0, hi0 = bands(model, ks)
    lo1, hi1 = bands(model, np.asarray(ks) + np.pi)
    return np.vstack([lo0, lo1, hi0, hi1])


def _has_interior_crossing(model: BlochModel, nk: int) -> bool:
    ks = np.linspace(-np.pi / 2, np.pi / 2, nk)[1:-1]  # branches meet at the edges
    lo0, _ = bands(model, ks)
    lo1, _ = bands(model, ks + np.pi)
    d = lo0 - lo1
    return bool(np.any(np.sign(d[:-1]) * np.sign(d[1:]) < 0))


def folded_crossing(g_min: float, g_max: float, J: float = 1.0, nk: int = 4096,
                    n_scan: int = 64, tol: float = 1e-4) -> float | None:
    """Smallest g in [g_min, g_max] where the two lowest folded sub-bands cross.

    Grid scan for the onset, then bisection in g; None when no crossing exists
    in the range.
    """
    grid = np.linspace(g_min, g_max, n_scan)
    flags = [_has_interior_crossing(BlochModel(g=float(g), J=J), nk) for g in grid]
    onset = next((i for i, f in enumerate(flags) if f), None)
    if onset is None:
        return None
    if onset == 0:
        return float(grid[0])
    lo, hi = float(grid[onset - 1]), float(grid[onset])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _has_interior_crossing(BlochModel(g=mid, J=J), nk):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)

"""Ground states of sector Hamiltonians.

Large sectors go through ARPACK's implicitly restarted Lanczos (scipy.eigsh)
with a seeded start vector and explicitly verified residuals; small sectors
fall back to dense LAPACK diagonalization, which also serves as the oracle
for cross-checks.  Eigenvector phases are fixed deterministically (largest
magnitude component made real positive) so repeated runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .hamiltonian import SparseOperator

DENSE_CUTOFF = 400          # below this dimension eigsh gains nothing
DENSE_MAX_DIM = 20_000
DEFAULT_TOL = 1e-10         # residual bound, relative to the spectral width
DEFAULT_MAXITER = 2000
DEGENERACY_RTOL = 1e-8      # gap below this (x width) counts as one multiplet


class ConvergenceError(RuntimeError):
    """Eigensolver failed; carries the best residual reached."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass
class SpectralResult:
    """Ascending eigenvalues with orthonormal, phase-fixed eigenvectors."""

    energies: np.ndarray
    vectors: np.ndarray            # column i <-> energies[i]
    residuals: np.ndarray
    seed: int
    multiplet_dim: int = 1         # size of the (near-)degenerate ground multiplet
    multiplet_open: bool = False   # True if the multiplet may extend past computed states
    meta: dict = field(default_factory=dict)

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    def ground_multiplet(self) -> np.ndarray:
        return self.vectors[:, : self.multiplet_dim]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    ph = v[i] / abs(v[i])
    return v * np.conj(ph)


def _width_estimate(op: SparseOperator) -> float:
    """Gershgorin-style spectral width bound; cheap and deterministic."""
    row_sums = np.abs(op.upper).sum(axis=1).A1 + np.abs(op.upper).sum(axis=0).A1
    radius = np.max(np.abs(op.diag) + row_sums) if op.dim else 1.0
    return max(2.0 * float(radius), 1e-30)


def _finalize(op: SparseOperator, energies, vectors, seed, tol, width, meta) -> SpectralResult:
    order = np.argsort(energies)
    energies = np.asarray(energies, dtype=float)[order]
    vectors = np.asarray(vectors, dtype=complex)[:, order]
    # ARPACK vectors inside a (near-)degenerate block may lose orthogonality;
    # re-orthonormalize blockwise without leaving the invariant subspace
    start = 0
    for i in range(1, len(energies) + 1):
        if i == len(energies) or energies[i] - energies[i - 1] > DEGENERACY_RTOL * width:
            if i - start > 1:
                q, _ = np.linalg.qr(vectors[:, start:i])
                vectors[:, start:i] = q
            start = i
    for i in range(vectors.shape[1]):
        vectors[:, i] = _fix_phase(vectors[:, i])
    residuals = np.array([
        np.linalg.norm(op.apply(vectors[:, i]) - energies[i] * vectors[:, i])
        for i in range(vectors.shape[1])
    ])
    worst = float(residuals.max()) if len(residuals) else 0.0
    if worst > tol * width:
        raise ConvergenceError("residual exceeds tolerance", worst)
    mdim = 1
    while mdim < len(energies) and energies[mdim] - energies[0] < DEGENERACY_RTOL * width:
        mdim += 1
    meta = dict(meta, width_estimate=width)
    return SpectralResult(energies=energies, vectors=vectors, residuals=residuals,
                          seed=seed, multiplet_dim=mdim,
                          multiplet_open=(mdim == len(energies) and mdim < op.dim),
                          meta=meta)


def lanczos_ground(op: SparseOperator, k: int = 1, seed: int = 0,
                   tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER,
                   v0: np.ndarray | None = None) -> SpectralResult:
    """k lowest eigenpairs of a Hermitian sector operator.

    Deterministic for a fixed seed; a previous ground vector may be passed as
    ``v0`` to warm-start sweeps.  A few extra pairs beyond k are converged so
    the ground multiplet dimension can be reported.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not op.hermitian:
        raise ValueError("operator must be Hermitian")
    dim = op.dim
    width = _width_estimate(op)
    kk = min(max(k + 3, 5), dim - 1) if dim > 1 else 1
    if dim <= max(DENSE_CUTOFF, k + 4):
        w, v = np.linalg.eigh(op.to_dense())
        keep = min(max(k, min(kk, dim)), dim)
        return _finalize(op, w[:keep], v[:, :keep], seed, tol, width,
                         {"method": "dense-fallback"})
    if v0 is None:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    ncv = min(dim, max(4 * kk + 8, 40))
    try:
        w, v = spla.eigsh(op.aslinearoperator(), k=kk, which="SA", v0=v0,
                          ncv=ncv, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        best = np.inf
        if exc.eigenvalues is not None and len(exc.eigenvalues):
            best = min(
                np.linalg.norm(op.apply(exc.eigenvectors[:, i])
                               - exc.eigenvalues[i] * exc.eigenvectors[:, i])
                for i in range(len(exc.eigenvalues))
            )
        raise ConvergenceError(f"ARPACK did not converge in {maxiter} iterations",
                               float(best)) from exc
    return _finalize(op, w, v, seed, tol, width, {"method": "arpack", "ncv": ncv})


def dense_spectrum(op: SparseOperator) -> SpectralResult:
    """Full spectrum by dense diagonalization; the small-system oracle."""
    if op.dim > DENSE_MAX_DIM:
        raise ValueError(f"dimension {op.dim} too large for dense diagonalization "
                         f"(max {DENSE_MAX_DIM})")
    w, v = np.linalg.eigh(op.to_dense())
    width = max(float(w[-1] - w[0]), 1e-30)
    return _finalize(op, w, v, seed=0, tol=1e-8, width=width, meta={"method": "dense"})

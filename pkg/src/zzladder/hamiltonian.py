"""Many-body Hamiltonian of the zig-zag ladder as a sparse Hermitian operator.

Term content per source site j (upper sign / even j, lower sign / odd j; all
amplitudes in units of J, with w = exp(2*pi*i/3)):

    j -> j+1 : -[1 + 2g (w^-+1 (1-n_{j-1}) + w^+-1 (1-n_{j+2}))]
    j -> j+2 : -[1 + 2g w^+-2 (1-n_{j+1})]
    j -> j+3 : -2g [w^-+1 (1-n_{j+1}) + w^+-1 (1-n_{j+2})]
    j -> j+4 : -2g (1-n_{j+2})
    diagonal : -2g*eta n_j [(1-n_{j-1}) + (1-n_{j+1}) + (1-n_{j-2}) + (1-n_{j+2})]

plus Hermitian conjugates.  Under OBC any term referencing a site outside
[0, L) is dropped entirely: the second-order process needs the mediating
atom, so a missing site kills the channel (n = 0 is NOT substituted).

The operator is assembled as H(g, eta) = A + g*B + g*eta*C where A holds the
direct hops, B the density-assisted complex hops and C the diagonal; sweeps
over (g, eta) therefore build the three parts once.

The Jordan-Wigner fermion counterpart is derived programmatically: each
bosonic hop gains the operator string product_(l between) (1 - 2 n_l), with
(1 - 2n)(1 - n) = (1 - n) absorbing the factor on the gated mediator, and
matrix elements are then evaluated with fermionic anticommutation signs.
The two signs are computed by independent code paths and must cancel, so
the boson/fermion spectral match is a real consistency check of the term
algebra.  The build is restricted to OBC where the string has no wrap
ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numba import njit

from .basis import _BINOM, _rank_kernel, BasisSector, ModelParams


@dataclass(frozen=True)
class TermTable:
    """Flattened hop terms: src[i] -> tgt[i], gated by emptiness of cond[i] (-1 = no gate).

    ``group`` is 0 for direct (g-independent) hops, 1 for second-order hops.
    ``between`` is the bit mask strictly between src and tgt (Jordan-Wigner string).
    Coefficients for even/odd j are complex conjugates wherever the sign rule applies.
    """

    src: np.ndarray
    tgt: np.ndarray
    cond: np.ndarray
    coef: np.ndarray
    group: np.ndarray
    between: np.ndarray
    diag_pairs: np.ndarray  # (m, 2) site pairs (j, k): counts n_j (1 - n_k)
    L: int
    boundary: str
    J: float


def build_terms(params: ModelParams) -> TermTable:
    L, J, pbc = params.L, params.J, params.pbc
    w = np.exp(2j * np.pi / 3)

    def sgn_pow(m: int, j: int) -> complex:
        # upper sign for even j (sub-chain A), lower for odd j (sub-chain B)
        return w ** (m if j % 2 == 0 else -m)

    src, tgt, cond, coef, group, between = [], [], [], [], [], []

    def add(j, d, c, amp, grp):
        t = j + d
        sites = [j, t] + ([] if c is None else [j + c])
        if pbc:
            sites = [s % L for s in sites]
        elif any(not 0 <= s < L for s in sites):
            return  # OBC truncation: missing site kills the whole channel
        src.append(sites[0])
        tgt.append(sites[1])
        cond.append(sites[2] if c is not None else -1)
        coef.append(amp * J)
        group.append(grp)
        # string between the pre-wrap endpoints; only meaningful for OBC
        mask = 0
        for s in range(j + 1, j + d):
            mask |= 1 << s
        between.append(mask if not pbc else 0)

    for j in range(L):
        add(j, 1, None, -1.0, 0)
        add(j, 1, -1, -2 * sgn_pow(-1, j), 1)
        add(j, 1, +2, -2 * sgn_pow(+1, j), 1)
        add(j, 2, None, -1.0, 0)
        add(j, 2, +1, -2 * sgn_pow(+2, j), 1)
        add(j, 3, +1, -2 * sgn_pow(-1, j), 1)
        add(j, 3, +2, -2 * sgn_pow(+1, j), 1)
        add(j, 4, +2, -2.0, 1)

    pairs = []
    for j in range(L):
        for k in (j - 1, j + 1, j - 2, j + 2):
            if pbc:
                pairs.append((j, k % L))
            elif 0 <= k < L:
                pairs.append((j, k))

    return TermTable(
        src=np.array(src, dtype=np.int64),
        tgt=np.array(tgt, dtype=np.int64),
        cond=np.array(cond, dtype=np.int64),
        coef=np.array(coef, dtype=np.complex128),
        group=np.array(group, dtype=np.uint8),
        between=np.array(between, dtype=np.int64),
        diag_pairs=np.array(pairs, dtype=np.int64).reshape(-1, 2),
        L=L,
        boundary=params.boundary,
        J=J,
    )


@njit(cache=True)
def _parity(x):
    p = 1
    while x:
        x &= x - 1
        p = -p
    return p


@njit(cache=True)
def _count_entries(states, src, tgt, cond):
    total = 0
    for si in range(len(states)):
        s = states[si]
        for t in range(len(src)):
            if (s >> src[t]) & 1 and not (s >> tgt[t]) & 1:
                if cond[t] >= 0 and (s >> cond[t]) & 1:
                    continue
                total += 1
    return total


@njit(cache=True)
def _fill_entries(states, binom, src, tgt, cond, coef, sign_mask, stat_mask,
                  fermi_stats, rows, cols, vals):
    n = 0
    for si in range(len(states)):
        s = states[si]
        for t in range(len(src)):
            if (s >> src[t]) & 1 and not (s >> tgt[t]) & 1:
                if cond[t] >= 0 and (s >> cond[t]) & 1:
                    continue
                s2 = s ^ (np.int64(1) << src[t]) ^ (np.int64(1) << tgt[t])
                ti = _rank_kernel(s2, binom)
                amp = coef[t] * _parity(s & sign_mask[t])
                if fermi_stats:
                    amp *= _parity(s & stat_mask[t])
                # store the upper triangle only; H[r,c] with r < c
                if ti < si:
                    rows[n] = ti
                    cols[n] = si
                    vals[n] = amp
                else:
                    rows[n] = si
                    cols[n] = ti
                    vals[n] = np.conj(amp)
                n += 1
    return n


@njit(cache=True)
def _diag_counts(states, pairs):
    out = np.zeros(len(states), dtype=np.float64)
    for si in range(len(states)):
        s = states[si]
        c = 0
        for p in range(pairs.shape[0]):
            if (s >> pairs[p, 0]) & 1 and not (s >> pairs[p, 1]) & 1:
                c += 1
        out[si] = c
    return out


@dataclass
class SparseOperator:
    """Hermitian operator in one particle-number sector.

    Off-diagonal amplitudes are stored once, in the strict upper triangle,
    with the Hermitian conjugate implied; ``diag`` is the real diagonal.
    Immutable in practice: apply() never mutates, and shared reads are safe.
    """

    dim: int
    diag: np.ndarray
    upper: sp.csr_matrix
    hermitian: bool = True
    meta: dict = field(default_factory=dict)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """y = H x with a fixed per-row summation order (thread-count independent)."""
        if vec.shape != (self.dim,):
            raise ValueError(f"vector has shape {vec.shape}, operator dim {self.dim}")
        y = self.diag * vec
        y += self.upper @ vec
        y += np.conj(np.conj(vec) @ self.upper)  # (U^H x) without materializing U^H
        return y

    def to_dense(self) -> np.ndarray:
        h = self.upper.toarray()
        return h + h.conj().T + np.diag(self.diag.astype(np.complex128))

    def aslinearoperator(self):
        from scipy.sparse.linalg import LinearOperator

        return LinearOperator(shape=(self.dim, self.dim), dtype=np.complex128,
                              matvec=self.apply)

    @property
    def nnz(self) -> int:
        """Stored entries (upper triangle + diagonal); full matrix has 2x the off-diagonals."""
        return int(self.upper.nnz) + self.dim

    def trace(self) -> float:
        return float(self.diag.sum())


@dataclass
class HamiltonianParts:
    """g/eta-independent pieces; combine(g, eta) -> A + g B + g eta C."""

    sector: BasisSector
    direct: sp.csr_matrix
    assisted: sp.csr_matrix
    diag_counts: np.ndarray
    J: float
    boundary: str
    fermion: bool = False

    def combine(self, g: float, eta: float) -> SparseOperator:
        upper = (self.direct + g * self.assisted).tocsr() if g != 0 else self.direct.copy()
        diag = (-2.0 * self.J * g * eta) * self.diag_counts
        return SparseOperator(
            dim=self.sector.dim, diag=diag, upper=upper,
            meta={"L": self.sector.L, "N": self.sector.N, "g": g, "eta": eta,
                  "J": self.J, "boundary": self.boundary, "fermion": self.fermion},
        )


def _build_group(sector: BasisSector, terms: TermTable, keep: np.ndarray,
                 fermion: bool) -> sp.csr_matrix:
    src, tgt = terms.src[keep], terms.tgt[keep]
    cond, coef = terms.cond[keep], terms.coef[keep]
    stat_mask = terms.between[keep]
    if fermion:
        # Jordan-Wigner normal form: string (1-2n) on every intermediate site,
        # with the factor on a gated mediator absorbed by (1-2n)(1-n) = (1-n).
        sign_mask = stat_mask.copy()
        gated = cond >= 0
        sign_mask[gated] &= ~(np.int64(1) << cond[gated])
    else:
        sign_mask = np.zeros_like(stat_mask)
    n = _count_entries(sector.states, src, tgt, cond)
    rows = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.complex128)
    _fill_entries(sector.states, _BINOM, src, tgt, cond, coef, sign_mask,
                  stat_mask, fermion, rows, cols, vals)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(sector.dim, sector.dim))
    return m.tocsr()


def build_parts(params: ModelParams, sector: BasisSector,
                fermion: bool = False) -> HamiltonianParts:
    if sector.L != params.L or sector.N != params.N:
        raise ValueError(f"sector (L={sector.L}, N={sector.N}) does not match "
                         f"params (L={params.L}, N={params.N})")
    if fermion and params.pbc:
        raise ValueError("Jordan-Wigner build supports OBC only "
                         "(string wrap is ambiguous under PBC)")
    terms = build_terms(params)
    direct = _build_group(sector, terms, terms.group == 0, fermion)
    assisted = _build_group(sector, terms, terms.group == 1, fermion)
    counts = _diag_counts(sector.states, terms.diag_pairs)
    return HamiltonianParts(sector=sector, direct=direct, assisted=assisted,
                            diag_counts=counts, J=params.J,
                            boundary=params.boundary, fermion=fermion)


def build_boson(params: ModelParams, sector: BasisSector) -> SparseOperator:
    """Hard-core boson Hamiltonian on the sector, H = A + g B + g eta C."""
    return build_parts(params, sector).combine(params.g, params.eta)


def build_fermion_jw(params: ModelParams, sector: BasisSector) -> SparseOperator:
    """Jordan-Wigner fermion Hamiltonian; spectrum equals the boson one (OBC)."""
    return build_parts(params, sector, fermion=True).combine(params.g, params.eta)


def apply(op: SparseOperator, vec: np.ndarray) -> np.ndarray:
    return op.apply(vec)


DUMP_VERSION = 1


def dump_operator(op: SparseOperator, path) -> None:
    """Versioned binary dump for reuse across observable runs."""
    meta = op.meta
    np.savez_compressed(
        path,
        version=np.int64(DUMP_VERSION),
        L=np.int64(meta.get("L", -1)),
        N=np.int64(meta.get("N", -1)),
        g=np.float64(meta.get("g", np.nan)),
        eta=np.float64(meta.get("eta", np.nan)),
        J=np.float64(meta.get("J", np.nan)),
        boundary=np.bytes_(meta.get("boundary", "?").encode()),
        fermion=np.bool_(meta.get("fermion", False)),
        nnz=np.int64(op.nnz),
        dim=np.int64(op.dim),
        diag=op.diag,
        data=op.upper.data,
        indices=op.upper.indices,
        indptr=op.upper.indptr,
    )


def load_operator(path) -> SparseOperator:
    with np.load(path) as z:
        version = int(z["version"])
        if version != DUMP_VERSION:
            raise ValueError(f"unsupported operator dump version {version}")
        dim = int(z["dim"])
        upper = sp.csr_matrix((z["data"], z["indices"], z["indptr"]), shape=(dim, dim))
        meta = {
            "L": int(z["L"]), "N": int(z["N"]), "g": float(z["g"]),
            "eta": float(z["eta"]), "J": float(z["J"]),
            "boundary": bytes(z["boundary"]).decode(), "fermion": bool(z["fermion"]),
        }
        return SparseOperator(dim=dim, diag=z["diag"], upper=upper, meta=meta)

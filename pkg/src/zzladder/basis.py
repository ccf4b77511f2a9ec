"""Fixed-particle-number configuration basis for hard-core bosons on a chain.

Configurations are L-bit integers, bit j = occupation of site j.  Even bits
form sub-chain A (upper), odd bits sub-chain B (lower); this makes the
even/odd sign rule of the hopping phases a parity test on the site index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

MAX_SITES = 32  # configurations must fit one machine word

_BINOM = np.zeros((MAX_SITES + 1, MAX_SITES + 1), dtype=np.int64)
for _n in range(MAX_SITES + 1):
    _BINOM[_n, 0] = 1
    for _k in range(1, _n + 1):
        _BINOM[_n, _k] = _BINOM[_n - 1, _k - 1] + _BINOM[_n - 1, _k]


@dataclass(frozen=True)
class ModelParams:
    """Couplings and geometry of the zig-zag ladder; the single source of truth for a run.

    g is the relative strength of the second-order (density-assisted, complex)
    processes, eta scales the density-density repulsion, J sets the energy unit.
    The inter-chain angle is fixed at pi/3 (equilateral triangles).
    """

    L: int
    N: int = -1  # -1 means half filling
    g: float = 0.0
    eta: float = 0.0
    J: float = 1.0
    boundary: str = "pbc"
    alpha: float = math.pi / 3

    def __post_init__(self):
        if self.N == -1:
            object.__setattr__(self, "N", self.L // 2)
        if self.boundary not in ("pbc", "obc"):
            raise ValueError(f"boundary must be 'pbc' or 'obc', got {self.boundary!r}")
        if not (0 < self.L <= MAX_SITES):
            raise ValueError(f"L must be in [1, {MAX_SITES}], got {self.L}")
        if not (0 <= self.N <= self.L):
            raise ValueError(f"N must be in [0, L], got N={self.N}, L={self.L}")
        if self.boundary == "pbc" and self.L % 4 != 0:
            raise ValueError("PBC requires L to be a multiple of 4 "
                             "(commensurate with the 4-site unit cell and range-4 hops)")
        if self.g < 0 or self.eta < 0:
            raise ValueError("g and eta must be non-negative")
        if self.J <= 0:
            raise ValueError("J must be positive")

    @property
    def pbc(self) -> bool:
        return self.boundary == "pbc"


@njit(cache=True)
def _rank_kernel(state, binom):
    """Rank of a bit configuration among same-popcount configs in increasing order.

    Combinatorial number system: with set positions q_1 < q_2 < ... < q_N,
    rank = sum_i C(q_i, i).
    """
    r = 0
    i = 0
    q = 0
    s = state
    while s:
        if s & 1:
            i += 1
            r += binom[q, i]
        s >>= 1
        q += 1
    return r


@njit(cache=True)
def _unrank_kernel(index, L, N, binom):
    state = np.int64(0)
    r = index
    n = N
    for q in range(L - 1, -1, -1):
        if n == 0:
            break
        if binom[q, n] <= r:
            r -= binom[q, n]
            state |= np.int64(1) << q
            n -= 1
    return state


@dataclass(frozen=True)
class BasisSector:
    """All L-bit configurations with exactly N set bits, in increasing integer order.

    Immutable after construction; safe for shared concurrent reads.
    """

    L: int
    N: int
    states: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def rank(self, config: int) -> int:
        """Index of ``config`` in ``states``; raises if the particle number is wrong."""
        if bin(int(config)).count("1") != self.N:
            raise ValueError(f"config {config:#x} has wrong particle number "
                             f"(expected {self.N})")
        return int(_rank_kernel(np.int64(config), _BINOM))

    def unrank(self, index: int) -> int:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} out of range for dim {self.dim}")
        return int(self.states[index])

    def occupations(self) -> np.ndarray:
        """(dim, L) uint8 matrix of site occupations, one row per configuration."""
        sites = np.arange(self.L, dtype=np.int64)
        return ((self.states[:, None] >> sites[None, :]) & 1).astype(np.uint8)


def binomial(n: int, k: int) -> int:
    """C(n, k) from the precomputed table used by the ranking kernels."""
    if k < 0 or k > n:
        return 0
    return int(_BINOM[n, k])


def build_sector(L: int, N: int) -> BasisSector:
    """Enumerate the (L, N) sector with O(1) combinadic rank queries."""
    if not (0 < L <= MAX_SITES):
        raise ValueError(f"L must be in [1, {MAX_SITES}], got {L}")
    if not (0 <= N <= L):
        raise ValueError(f"need 0 <= N <= L, got N={N}, L={L}")
    dim = binomial(L, N)
    states = np.empty(dim, dtype=np.int64)
    _fill_states(states, L, N, _BINOM)
    states.setflags(write=False)
    return BasisSector(L=L, N=N, states=states)


@njit(cache=True)
def _fill_states(out, L, N, binom):
    for i in range(len(out)):
        out[i] = _unrank_kernel(i, L, N, binom)


def sector_for(params: ModelParams) -> BasisSector:
    return build_sector(params.L, params.N)

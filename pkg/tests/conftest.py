"""Shared oracles built from Kronecker products, independent of the bit kernels."""

import numpy as np
import pytest

from zzladder.basis import ModelParams

B = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # <0|b|1> = 1
BDAG = B.conj().T
NUM = BDAG @ B
ID2 = np.eye(2, dtype=complex)


def site_op(op: np.ndarray, j: int, L: int) -> np.ndarray:
    """Operator on site j embedded into the full 2^L space, bit 0 = site 0.

    Basis index i has occupation of site j in bit j of i, so site 0 is the
    fastest-running factor of the Kronecker product.
    """
    mats = [ID2] * L
    mats[j] = op
    out = np.array([[1.0 + 0j]])
    for m in mats:  # kron with site 0 innermost
        out = np.kron(m, out)
    return out


def kron_hamiltonian(params: ModelParams) -> np.ndarray:
    """Full-space Hamiltonian assembled term by term from 2x2 blocks."""
    L, g, eta, J = params.L, params.g, params.eta, params.J
    pbc = params.pbc
    dim = 2 ** L
    h = np.zeros((dim, dim), dtype=complex)
    w = np.exp(2j * np.pi / 3)

    def s(site):
        if pbc:
            return site % L
        return site if 0 <= site < L else None

    def hole(site):
        return np.eye(dim) - site_op(NUM, site, L)

    def hop(j, d, phases):
        # phases: list of (power, mediator offset or None); power 0 <-> direct
        nonlocal h
        t = s(j + d)
        if t is None:
            return
        base = site_op(BDAG, t, L) @ site_op(B, j, L)
        for power, off, scale in phases:
            if off is None:
                term = scale * J * base
            else:
                c = s(j + off)
                if c is None:
                    continue
                ph = w ** (power if j % 2 == 0 else -power)
                term = scale * J * ph * (base @ hole(c))
            h += term + term.conj().T

    for j in range(L):
        hop(j, 1, [(0, None, -1.0), (-1, -1, -2 * g), (+1, +2, -2 * g)])
        hop(j, 2, [(0, None, -1.0), (+2, +1, -2 * g)])
        hop(j, 3, [(-1, +1, -2 * g), (+1, +2, -2 * g)])
        hop(j, 4, [(0, +2, -2 * g)])
        for off in (-1, +1, -2, +2):
            k = s(j + off)
            if k is None:
                continue
            h += -2 * g * eta * J * site_op(NUM, j, L) @ hole(k)
    return h


def project_to_sector(h_full: np.ndarray, states: np.ndarray) -> np.ndarray:
    idx = np.asarray(states, dtype=np.int64)
    return h_full[np.ix_(idx, idx)]


def product_state_vector(amplitudes0, amplitudes1, L: int) -> np.ndarray:
    """Full-space product state with per-site amplitudes (a_j|0> + c_j|1>)."""
    vec = np.array([1.0 + 0j])
    for j in range(L):  # site 0 fastest-running, matching site_op
        vec = np.kron(np.array([amplitudes0[j], amplitudes1[j]]), vec)
    return vec


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)

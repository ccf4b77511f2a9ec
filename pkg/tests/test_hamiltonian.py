import numpy as np
import pytest

from conftest import kron_hamiltonian, project_to_sector
from zzladder.basis import ModelParams, build_sector
from zzladder.hamiltonian import (build_boson, build_fermion_jw, build_parts,
                                  build_terms, dump_operator, load_operator)


@pytest.mark.parametrize("L,N,boundary,g,eta", [
    (6, 3, "obc", 0.7, 1.3),
    (7, 3, "obc", 0.3, 0.0),
    (8, 4, "pbc", 2.0, 6.0),
    (8, 4, "pbc", 0.45, 1.0),
    (8, 5, "pbc", 1.1, 0.4),
])
def test_matches_kron_oracle(L, N, boundary, g, eta):
    params = ModelParams(L=L, N=N, g=g, eta=eta, boundary=boundary)
    sector = build_sector(L, N)
    dense = build_boson(params, sector).to_dense()
    oracle = project_to_sector(kron_hamiltonian(params), sector.states)
    assert np.abs(dense - oracle).max() < 1e-12


def test_single_particle_edge_hop_amplitude():
    # hop 0 -> 1 with empty lattice: the (1 - n_{-1}) channel is dropped under
    # OBC and the remaining channel contributes e^{+2 pi i/3}
    params = ModelParams(L=5, N=1, g=0.8, boundary="obc")
    sector = build_sector(5, 1)
    h = build_boson(params, sector).to_dense()
    amp = h[sector.rank(0b00010), sector.rank(0b00001)]
    expected = -params.J * (1 + 2 * params.g * np.exp(2j * np.pi / 3))
    assert abs(amp - expected) < 1e-14


def test_g_zero_is_real_short_ranged():
    params = ModelParams(L=8, N=4, g=0.0, eta=5.0)
    sector = build_sector(8, 4)
    h = build_boson(params, sector).to_dense()
    assert np.abs(h.imag).max() == 0.0
    assert np.abs(np.diag(h)).max() == 0.0  # eta enters only multiplied by g
    # every nonzero element connects states that differ by one hop of range 1 or 2
    for i, j in zip(*np.nonzero(np.abs(h) > 0)):
        moved = int(sector.states[i]) ^ int(sector.states[j])
        a, b = sorted(k for k in range(8) if (moved >> k) & 1)
        assert min(b - a, 8 - (b - a)) in (1, 2)


def test_ordered_state_diagonal():
    # in |1 1 0 0 1 1 0 0 ...> every occupied site has exactly 3 empty
    # neighbours among {j+-1, j+-2}, so the diagonal is -2 g eta J * 3 N
    L, N = 8, 4
    params = ModelParams(L=L, N=N, g=1.3, eta=2.5)
    sector = build_sector(L, N)
    h = build_boson(params, sector)
    state = 0b00110011
    i = sector.rank(state)
    assert abs(h.diag[i] - (-2 * params.g * params.eta * params.J * 3 * N)) < 1e-12


def test_hermiticity_residual():
    params = ModelParams(L=8, N=4, g=0.9, eta=1.7)
    h = build_boson(params, build_sector(8, 4)).to_dense()
    assert np.abs(h - h.conj().T).max() < 1e-12


def test_eta_only_on_diagonal():
    sector = build_sector(8, 4)
    h1 = build_boson(ModelParams(L=8, g=0.8, eta=0.3), sector).to_dense()
    h2 = build_boson(ModelParams(L=8, g=0.8, eta=4.0), sector).to_dense()
    off1 = h1 - np.diag(np.diag(h1))
    off2 = h2 - np.diag(np.diag(h2))
    assert np.abs(off1 - off2).max() == 0.0


def test_full_space_number_conservation():
    params = ModelParams(L=6, N=3, g=0.9, eta=0.7, boundary="obc")
    h = kron_hamiltonian(params)
    n_op = np.diag([bin(i).count("1") for i in range(2 ** 6)]).astype(complex)
    assert np.abs(h @ n_op - n_op @ h).max() < 1e-12


def test_apply_matches_dense(rng):
    params = ModelParams(L=10, N=5, g=0.6, eta=1.1, boundary="obc")
    sector = build_sector(10, 5)
    op = build_boson(params, sector)
    dense = op.to_dense()
    x = rng.standard_normal(sector.dim) + 1j * rng.standard_normal(sector.dim)
    assert np.abs(op.apply(x) - dense @ x).max() < 1e-12
    # column extraction via a basis unit vector
    e3 = np.zeros(sector.dim, dtype=complex)
    e3[3] = 1.0
    assert np.abs(op.apply(e3) - dense[:, 3]).max() < 1e-12
    # Hermitian quadratic form is real
    assert abs(np.vdot(x, op.apply(x)).imag) < 1e-10 * np.linalg.norm(x) ** 2


def test_apply_rejects_wrong_shape():
    params = ModelParams(L=6, N=3, g=0.2, boundary="obc")
    op = build_boson(params, build_sector(6, 3))
    with pytest.raises(ValueError):
        op.apply(np.zeros(5, dtype=complex))


@pytest.mark.parametrize("g,eta", [(0.5, 1.0), (2.0, 0.0), (1.0, 3.0), (0.7, 1.0)])
def test_jw_spectral_equivalence(g, eta):
    params = ModelParams(L=8, N=4, g=g, eta=eta, boundary="obc")
    sector = build_sector(8, 4)
    wb = np.linalg.eigvalsh(build_boson(params, sector).to_dense())
    wf = np.linalg.eigvalsh(build_fermion_jw(params, sector).to_dense())
    assert np.abs(wb - wf).max() < 1e-10


def test_jw_range1_hop_has_no_string():
    params = ModelParams(L=6, N=1, g=0.4, boundary="obc")
    sector = build_sector(6, 1)
    hb = build_boson(params, sector).to_dense()
    hf = build_fermion_jw(params, sector).to_dense()
    i, j = sector.rank(0b000001), sector.rank(0b000010)
    assert hb[j, i] == hf[j, i]


def test_jw_rejects_pbc():
    params = ModelParams(L=8, N=4, g=0.5)
    with pytest.raises(ValueError):
        build_fermion_jw(params, build_sector(8, 4))


def test_sector_params_mismatch():
    params = ModelParams(L=8, N=4, g=0.5)
    with pytest.raises(ValueError):
        build_boson(params, build_sector(8, 3))


def test_parts_combination_linear_in_g_eta():
    sector = build_sector(8, 4)
    parts = build_parts(ModelParams(L=8, N=4), sector)
    h = parts.combine(0.7, 2.0)
    direct = parts.combine(0.0, 0.0).to_dense()
    assisted = parts.combine(1.0, 0.0).to_dense() - direct
    diag = parts.combine(1.0, 1.0).to_dense() - direct - assisted
    recombined = direct + 0.7 * assisted + 0.7 * 2.0 * diag
    assert np.abs(h.to_dense() - recombined).max() < 1e-12


def test_obc_terms_never_reference_outside_sites():
    terms = build_terms(ModelParams(L=6, N=3, boundary="obc"))
    for arr in (terms.src, terms.tgt):
        assert arr.min() >= 0 and arr.max() < 6
    assert terms.cond.max() < 6


def test_dump_load_round_trip(tmp_path):
    params = ModelParams(L=8, N=4, g=0.8, eta=1.5)
    sector = build_sector(8, 4)
    op = build_boson(params, sector)
    path = tmp_path / "op.npz"
    dump_operator(op, path)
    back = load_operator(path)
    assert back.meta["L"] == 8 and back.meta["boundary"] == "pbc"
    assert np.abs(back.to_dense() - op.to_dense()).max() == 0.0


def test_load_rejects_unknown_version(tmp_path):
    params = ModelParams(L=4, N=2)
    op = build_boson(params, build_sector(4, 2))
    path = tmp_path / "op.npz"
    dump_operator(op, path)
    data = dict(np.load(path))
    data["version"] = np.int64(99)
    np.savez(path, **data)
    with pytest.raises(ValueError):
        load_operator(path)

import numpy as np
import pytest

from zzladder.basis import ModelParams, binomial, build_sector


def pascal(n, k):
    """Independent binomial oracle: literal Pascal-triangle recursion."""
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


def test_small_sector_enumeration():
    sec = build_sector(4, 2)
    assert sec.dim == 6
    assert sec.states.tolist() == [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]


def test_large_sector_dimension_pascal_oracle():
    sec = build_sector(24, 12)
    assert sec.dim == pascal(24, 12) == 2_704_156


def test_vacuum_sector():
    sec = build_sector(5, 0)
    assert sec.dim == 1
    assert sec.states.tolist() == [0]


def test_rank_extremes():
    sec = build_sector(4, 2)
    assert sec.rank(0b0011) == 0
    assert sec.rank(0b1100) == 5


def test_rank_random_configs_against_enumeration(rng):
    sec = build_sector(20, 10)
    for idx in rng.integers(0, sec.dim, size=50):
        config = sec.states[idx]
        assert sec.rank(int(config)) == int(np.searchsorted(sec.states, config)) == idx


@pytest.mark.parametrize("L,N", [(1, 0), (1, 1), (6, 3), (9, 4), (12, 6)])
def test_rank_unrank_round_trip(L, N):
    sec = build_sector(L, N)
    for i in range(sec.dim):
        assert sec.rank(sec.unrank(i)) == i


@pytest.mark.parametrize("L,N", [(6, 3), (10, 5), (13, 4)])
def test_states_sorted_and_popcount(L, N):
    sec = build_sector(L, N)
    assert np.all(np.diff(sec.states) > 0)
    assert all(bin(int(s)).count("1") == N for s in sec.states)
    assert sec.dim == binomial(L, N)


def test_rank_rejects_wrong_particle_number():
    sec = build_sector(6, 3)
    with pytest.raises(ValueError):
        sec.rank(0b000001)


def test_build_sector_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_sector(6, 7)
    with pytest.raises(ValueError):
        build_sector(40, 2)


def test_model_params_defaults_and_validation():
    p = ModelParams(L=12)
    assert p.N == 6 and p.pbc
    assert ModelParams(L=10, boundary="obc").N == 5
    with pytest.raises(ValueError):
        ModelParams(L=10, boundary="pbc")  # PBC needs L % 4 == 0
    with pytest.raises(ValueError):
        ModelParams(L=8, N=9)
    with pytest.raises(ValueError):
        ModelParams(L=8, boundary="twisted")
    with pytest.raises(ValueError):
        ModelParams(L=8, g=-0.1)


def test_occupations_matrix():
    sec = build_sector(5, 2)
    occ = sec.occupations()
    assert occ.shape == (sec.dim, 5)
    assert np.all(occ.sum(axis=1) == 2)
    i = sec.rank(0b10010)
    assert occ[i].tolist() == [0, 1, 0, 0, 1]

import numpy as np
import pytest

from conftest import kron_hamiltonian, product_state_vector
from zzladder.basis import ModelParams
from zzladder import gutzwiller as gz


def params16(g, eta=0.0):
    return ModelParams(L=16, N=8, g=g, eta=eta, boundary="pbc")


def test_uniform_state_at_zero_parameters():
    site = gz.build_state(gz.GutzwillerConfig(0.0, 0.0, 0.0, 8))
    assert np.abs(site.occupation - 0.5).max() < 1e-15
    assert np.abs(site.b_expect - 0.5).max() < 1e-15


def test_density_pattern_period_four():
    site = gz.build_state(gz.GutzwillerConfig(0.3, 0.7, 0.2, 16))
    n = site.occupation
    assert np.abs(n - np.roll(n, 4)).max() < 1e-15
    assert abs(n.mean() - 0.5) < 1e-15  # symmetric weights keep half filling
    # mirror structure: site 3 matches site 0, sites 1 and 2 match
    assert abs(n[0] - n[3]) < 1e-15 and abs(n[1] - n[2]) < 1e-15
    assert n[0] > 0.5 > n[1]


def test_config_validation():
    with pytest.raises(ValueError):
        gz.GutzwillerConfig(1.0, 0.0, 0.0, 16)
    with pytest.raises(ValueError):
        gz.GutzwillerConfig(0.1, 0.0, 0.0, 10)
    with pytest.raises(ValueError):
        gz.GutzwillerConfig(0.1, 0.0, 0.0, 16, variant="other")


@pytest.mark.parametrize("variant", list(gz.VARIANTS))
def test_factorized_energy_matches_contraction(rng, variant):
    p = ModelParams(L=8, N=4, g=1.0, eta=0.7, boundary="pbc")
    h = kron_hamiltonian(p)
    for _ in range(4):
        cfg = gz.GutzwillerConfig(float(rng.uniform(-0.6, 0.6)),
                                  float(rng.uniform(-np.pi, np.pi)),
                                  float(rng.uniform(-np.pi, np.pi)), 8,
                                  variant=variant)
        site = gz.build_state(cfg)
        vec = product_state_vector(site.a, site.b * np.exp(1j * site.chi), 8)
        exact = np.vdot(vec, h @ vec).real
        assert abs(gz.energy(cfg, p) - exact) < 1e-10


def test_direct_hop_energy_uniform_state():
    # g = 0, uniform state: L range-1 bonds plus L range-2 bonds, each
    # contributing -J * 2 Re <b+><b> = -J/2
    p = ModelParams(L=8, N=4, g=0.0, eta=0.0, boundary="pbc")
    cfg = gz.GutzwillerConfig(0.0, 0.0, 0.0, 8)
    assert abs(gz.energy(cfg, p) - (-8.0)) < 1e-12


def test_global_phase_invariance(rng):
    p = params16(0.9)
    cfg = gz.GutzwillerConfig(0.25, 0.4, 0.8, 16)
    site = gz.build_state(cfg)
    e0 = gz.energy_from_amplitudes(site, p)
    shifted = gz.SiteAmplitudes(a=site.a, b=site.b, chi=site.chi + 1.2345)
    assert abs(gz.energy_from_amplitudes(shifted, p) - e0) < 1e-12


def test_small_g_optimum_is_trivial():
    p = params16(0.001)
    res = gz.optimize(p, restarts=8, seed=0)
    assert abs(res.config.epsilon) < 1e-3
    assert abs(res.energy - gz.energy(gz.GutzwillerConfig(0, 0, 0, 16), p)) < 1e-6


def test_variational_transition_at_half():
    # the uniform superfluid branch and the staggered-phase branch cross at
    # exactly g = 1/2 (both energies are linear in g)
    e_u = lambda g: gz.energy(gz.GutzwillerConfig(0, 0, 0, 16), params16(g))
    e_s = lambda g: gz.energy(gz.GutzwillerConfig(0, np.pi / 2, 0, 16), params16(g))
    assert e_u(0.45) < e_s(0.45)
    assert e_u(0.55) > e_s(0.55)
    assert abs(e_u(0.5) - e_s(0.5)) < 1e-12
    # optimizer tracks the branch change
    assert abs(gz.optimize(params16(0.45), restarts=8, seed=1).config.theta) < 0.1
    assert abs(abs(gz.optimize(params16(0.7), restarts=8, seed=1).config.theta)
               - np.pi / 2) < 0.1


def test_degenerate_minima_come_in_conjugate_pairs():
    res = gz.optimize(params16(1.0), restarts=16, seed=0)
    thetas = sorted(round(c.theta, 3) for c, _ in res.minima[:2])
    # complex conjugation maps one minimum to the other
    assert len(res.minima) >= 2
    assert abs(res.minima[0][1] - res.minima[1][1]) < 1e-8


def test_chi_links_to_modulation():
    flat = gz.GutzwillerConfig(0.0, np.pi / 2, 0.4, 16)
    assert gz.chi_of_config(flat) < 1e-15
    mod = gz.GutzwillerConfig(0.134, np.pi / 2, 0.317, 16)
    assert gz.chi_of_config(mod) > 0.05


def test_restart_validation():
    with pytest.raises(ValueError):
        gz.optimize(params16(1.0), restarts=0)


def test_epsilon_scan_rows():
    p = params16(0.0)
    rows = gz.epsilon_scan(p, [0.3, 0.7], restarts=4, seed=0)
    assert [r["g"] for r in rows] == [0.3, 0.7]
    assert set(rows[0]) >= {"epsilon", "theta", "phi", "energy", "chi", "variant"}

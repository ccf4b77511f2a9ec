"""Ground-state observables: densities, correlations, currents, fluxes, fidelity.

Bond currents are available in two conventions.  "continuity" carries the
coefficients obtained by evaluating i[H, n_j] exactly (the g-dependent parts
enter with 2gJ and 2*sqrt(3)*gJ); "paper" halves those two coefficients,
matching the published closed forms.  Both share the direct 2J Im<b+ b> part
and all sign structure; the continuity convention is the one that
reconstructs the commutator exactly, so it is what the divergence check
validates against.

Plaquette fluxes follow the density form

    Phi_j = -(pi/3) (n_{j+2} + n_{j+1} - n_{j-1} - n_{j+4})

and the link-phase sum Theta_j reproduces Phi_j + 2*pi/3 configuration by
configuration (the range-2 link carries the constant phase -+ 2*pi/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .basis import _BINOM, BasisSector, ModelParams, _rank_kernel
from .hamiltonian import SparseOperator, build_boson

SQRT3 = math.sqrt(3.0)

CURRENT_CONVENTIONS = ("paper", "continuity")


def _check_state(psi: np.ndarray, sector: BasisSector) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (sector.dim,):
        raise ValueError(f"state has shape {psi.shape}, sector dim {sector.dim}")
    return psi


@njit(cache=True)
def _hop_expectation(states, binom, psi, j_to, j_from, gate_site, gate_occupied):
    """<b+_{j_to} F b_{j_from}> with F = n_gate or (1-n_gate); gate_site < 0 disables F."""
    acc = 0.0 + 0.0j
    one = np.int64(1)
    for si in range(len(states)):
        s = states[si]
        if (s >> j_from) & 1 and not (s >> j_to) & 1:
            if gate_site >= 0:
                occ = (s >> gate_site) & 1
                if occ != gate_occupied:
                    continue
            s2 = s ^ (one << j_from) ^ (one << j_to)
            ti = _rank_kernel(s2, binom)
            acc += np.conj(psi[ti]) * psi[si]
    return acc


@njit(cache=True)
def _corr1_kernel(states, binom, psi, L):
    out = np.zeros((L, L), dtype=np.complex128)
    one = np.int64(1)
    for si in range(len(states)):
        s = states[si]
        w = psi[si]
        for l in range(L):
            if not (s >> l) & 1:
                continue
            for k in range(L):
                if k == l or (s >> k) & 1:
                    continue
                s2 = s ^ (one << l) ^ (one << k)
                ti = _rank_kernel(s2, binom)
                out[k, l] += np.conj(psi[ti]) * w
    return out


def density(psi: np.ndarray, sector: BasisSector) -> np.ndarray:
    """Per-site <n_j>."""
    psi = _check_state(psi, sector)
    w = np.abs(psi) ** 2
    return sector.occupations().T.astype(float) @ w


def corr1(psi: np.ndarray, sector: BasisSector, k: int | None = None,
          l: int | None = None):
    """First-order correlations <b+_k b_l>; full Hermitian matrix if k, l omitted."""
    psi = _check_state(psi, sector)
    mat = _corr1_kernel(sector.states, _BINOM, psi, sector.L)
    np.fill_diagonal(mat, density(psi, sector))
    if k is None and l is None:
        return mat
    return complex(mat[k, l])


def spin_correlations(corr: np.ndarray) -> dict[str, np.ndarray]:
    """Spin-1/2 correlators equivalent to the boson correlations.

    Re<b+_k b_l> = <SxSx> + <SySy> and Im<b+_k b_l> = <SySx> - <SxSy>,
    the combinations accessible through global/local spin rotations.
    """
    re, im = corr.real, corr.imag
    return {"SxSx": re / 2, "SySy": re / 2, "SySx": im / 2, "SxSy": -im / 2}


def _g2_from_moments(dens: np.ndarray, nn: np.ndarray, L: int, pbc: bool,
                     average_reference: bool) -> np.ndarray:
    """Connected correlator per distance.

    Averaged form treats the reference site as part of the ensemble:
    mean_r <n_r n_{r+d}> - mean_r <n_r> mean_r <n_{r+d}>, which stays
    meaningful for symmetry-broken product states where the per-reference
    connected value vanishes identically.
    """
    out = np.empty(L)
    for d in range(L):
        if pbc:
            rs = np.arange(L)
            ts = (rs + d) % L
        else:
            rs = np.arange(L - d)
            ts = rs + d
        if average_reference:
            out[d] = nn[rs, ts].mean() - dens[rs].mean() * dens[ts].mean()
        else:
            out[d] = nn[0, d % L] - dens[0] * dens[d % L]
    return out


def g2(psi: np.ndarray, sector: BasisSector, params: ModelParams,
       average_reference: bool | None = None) -> np.ndarray:
    """Connected density-density correlation versus distance.

    PBC uses site 0 as reference (translation-equivalent); OBC averages over
    all valid reference sites.  ``average_reference`` overrides the default.
    """
    psi = _check_state(psi, sector)
    L = sector.L
    w = np.abs(psi) ** 2
    occ = sector.occupations().astype(float)
    dens = occ.T @ w
    nn = occ.T @ (occ * w[:, None])  # <n_k n_l>
    if average_reference is None:
        average_reference = not params.pbc
    return _g2_from_moments(dens, nn, L, params.pbc, average_reference)


def g2_multiplet(vectors: np.ndarray, sector: BasisSector, params: ModelParams,
                 average_reference: bool | None = None) -> np.ndarray:
    """g2 of the equal-weight mixture of the (degenerate) multiplet columns."""
    L = sector.L
    occ = sector.occupations().astype(float)
    m = vectors.shape[1]
    dens = np.zeros(L)
    nn = np.zeros((L, L))
    for a in range(m):
        w = np.abs(vectors[:, a]) ** 2
        dens += occ.T @ w / m
        nn += occ.T @ (occ * w[:, None]) / m
    if average_reference is None:
        average_reference = not params.pbc
    return _g2_from_moments(dens, nn, L, params.pbc, average_reference)


def _site(params: ModelParams, s: int) -> int:
    if params.pbc:
        return s % params.L
    return s if 0 <= s < params.L else -1


def _current_scale(convention: str) -> float:
    if convention == "continuity":
        return 2.0
    if convention == "paper":
        return 1.0
    raise ValueError(f"unknown current convention {convention!r}; "
                     f"expected one of {CURRENT_CONVENTIONS}")


def current_nnn(psi: np.ndarray, sector: BasisSector, params: ModelParams,
                j: int, convention: str = "paper") -> float:
    """Intra-chain bond current I_{j -> j+2}; sign rule follows the parity of j."""
    psi = _check_state(psi, sector)
    scale = _current_scale(convention)
    J, g = params.J, params.g
    j2 = _site(params, j + 2)
    if j < 0 or j >= params.L or j2 < 0:
        raise ValueError(f"bond {j}->{j + 2} out of range for OBC L={params.L}")
    j1 = _site(params, j + 1)
    st, bi = sector.states, _BINOM
    w0 = _hop_expectation(st, bi, psi, j, j2, -1, 0)
    w1 = _hop_expectation(st, bi, psi, j, j2, j1, 0) if j1 >= 0 else 0j
    sgn = 1.0 if j % 2 == 0 else -1.0
    return (2 * J * w0.imag
            - scale * g * J * w1.imag
            + sgn * scale * SQRT3 * g * J * w1.real)


def current_nn(psi: np.ndarray, sector: BasisSector, params: ModelParams,
               j: int, convention: str = "paper") -> float:
    """Inter-chain bond current I_{j -> j+1}.

    Each second-order channel (mediator j-1 or j+2) is dropped when its
    mediating site does not exist under OBC, mirroring the Hamiltonian rule.
    """
    psi = _check_state(psi, sector)
    scale = _current_scale(convention)
    J, g = params.J, params.g
    j1 = _site(params, j + 1)
    if j < 0 or j >= params.L or j1 < 0:
        raise ValueError(f"bond {j}->{j + 1} out of range for OBC L={params.L}")
    jm = _site(params, j - 1)
    jp = _site(params, j + 2)
    st, bi = sector.states, _BINOM
    w0 = _hop_expectation(st, bi, psi, j, j1, -1, 0)
    y_minus = _hop_expectation(st, bi, psi, j, j1, jm, 0) if jm >= 0 else 0j
    y_plus = _hop_expectation(st, bi, psi, j, j1, jp, 0) if jp >= 0 else 0j
    sgn = 1.0 if j % 2 == 0 else -1.0
    return (2 * J * w0.imag
            - scale * g * J * (y_minus.imag + y_plus.imag)
            + sgn * scale * SQRT3 * g * J * (y_minus.real - y_plus.real))


def current_divergence_check(psi: np.ndarray, params: ModelParams,
                             sector: BasisSector,
                             op: SparseOperator | None = None) -> np.ndarray:
    """<i[H, n_j]> per site, straight from the sparse operator.

    Independent of the bond formulas; vanishes on any eigenstate and its sum
    over j vanishes identically (total number conservation).
    """
    psi = _check_state(psi, sector)
    if op is None:
        op = build_boson(params, sector)
    hpsi = op.apply(psi)
    occ = sector.occupations().astype(float)
    out = np.empty(params.L)
    for j in range(params.L):
        nj = occ[:, j]
        # i(<psi|H n_j|psi> - <psi|n_j H|psi>) = -2 Im <H psi | n_j psi>
        out[j] = -2.0 * np.vdot(hpsi, nj * psi).imag
    return out


# --- plaquette fluxes -------------------------------------------------------

CLASSICAL_FLUX = 2 * math.pi / 3


def _plaquette_sites(params: ModelParams, j: int) -> tuple[int, int, int, int]:
    sites = tuple(_site(params, s) for s in (j + 2, j + 1, j - 1, j + 4))
    if j < 0 or j >= params.L or any(s < 0 for s in sites):
        raise ValueError(f"plaquette {j} references sites outside the open chain")
    return sites


def flux_value(occ_row: np.ndarray, params: ModelParams, j: int) -> float:
    """Quantum flux eigenvalue of one occupation configuration."""
    s2, s1, sm, s4 = _plaquette_sites(params, j)
    return -(math.pi / 3) * (occ_row[s2] + occ_row[s1] - occ_row[sm] - occ_row[s4])


def plaquette_flux(psi: np.ndarray, sector: BasisSector, params: ModelParams,
                   j: int) -> tuple[float, float]:
    """(<Phi_j>, Var Phi_j) of the rhombus at sites (j, j+1, j+2, j+3)."""
    psi = _check_state(psi, sector)
    s2, s1, sm, s4 = _plaquette_sites(params, j)
    occ = sector.occupations().astype(float)
    vals = -(math.pi / 3) * (occ[:, s2] + occ[:, s1] - occ[:, sm] - occ[:, s4])
    w = np.abs(psi) ** 2
    mean = float(vals @ w)
    var = float((vals ** 2) @ w) - mean ** 2
    return mean, var


def valid_plaquettes(params: ModelParams) -> list[int]:
    if params.pbc:
        return list(range(params.L))
    return [j for j in range(1, params.L - 4)]


def flux_profile(psi: np.ndarray, sector: BasisSector,
                 params: ModelParams) -> tuple[list[int], np.ndarray, np.ndarray]:
    js = valid_plaquettes(params)
    means = np.empty(len(js))
    variances = np.empty(len(js))
    for i, j in enumerate(js):
        means[i], variances[i] = plaquette_flux(psi, sector, params, j)
    return js, means, variances


def link_phase(occ_row: np.ndarray, params: ModelParams, j: int, d: int) -> float:
    """Phase of the unitary link operator on one configuration (hop j -> j+d).

    The range-2 link carries the constant -+ 2*pi/3 (upper sign for even j);
    ranges 1 and 3 carry pi from the overall minus sign plus the
    density-difference part.
    """
    sgn = 1.0 if j % 2 == 0 else -1.0
    if d == 2:
        return -sgn * 2 * math.pi / 3
    if d == 1:
        s_p, s_m = _site(params, j + 2), _site(params, j - 1)
        np_, nm = (occ_row[s_p] if s_p >= 0 else 0), (occ_row[s_m] if s_m >= 0 else 0)
        return math.pi + sgn * (math.pi / 3) * (np_ - nm)
    if d == 3:
        s1, s2 = _site(params, j + 1), _site(params, j + 2)
        return math.pi + sgn * (2 * math.pi / 3) * (occ_row[s1] - occ_row[s2])
    raise ValueError(f"no link operator for hop range {d}")


def theta_plaquette(occ_row: np.ndarray, params: ModelParams, j: int) -> float:
    """Gauge-invariant plaquette phase sum, reduced to [0, 2*pi).

    Clockwise orientation: j -> j+2 -> j+3 -> j+1 -> j for even j, the
    reverse for odd j; equals flux_value + 2*pi/3 on every configuration.
    """
    sgn = 1.0 if j % 2 == 0 else -1.0
    theta = sgn * (link_phase(occ_row, params, j, 2)
                   + link_phase(occ_row, params, (j + 2) % params.L, 1)
                   - link_phase(occ_row, params, (j + 1) % params.L, 2)
                   - link_phase(occ_row, params, j, 1))
    return theta % (2 * math.pi)


def chi_order(psi: np.ndarray, sector: BasisSector, params: ModelParams) -> float:
    """Staggered flux order parameter; open boundaries, edge plaquettes excluded."""
    if params.pbc:
        raise ValueError("chi is defined for open boundary conditions")
    js = valid_plaquettes(params)
    if params.L < 9:  # after edge exclusion an even/odd pair must remain
        raise ValueError(f"L={params.L} too short for any interior plaquette pair")
    included = set(js[1:-1])  # exclude the first and last plaquette
    fluxes = {j: plaquette_flux(psi, sector, params, j)[0] for j in included}
    return chi_from_fluxes(fluxes, params.L)


def chi_from_fluxes(fluxes: dict[int, float], L: int) -> float:
    """chi = |(1/L) sum_{j=2n} (-1)^n (Phi_j + Phi_{j+1})| over available pairs."""
    total = 0.0
    found = False
    for j in sorted(fluxes):
        if j % 2 == 0 and (j + 1) in fluxes:
            total += (-1) ** (j // 2) * (fluxes[j] + fluxes[j + 1])
            found = True
    if not found:
        raise ValueError("no even/odd plaquette pair available for chi")
    return abs(total) / L


# --- fidelity ---------------------------------------------------------------

def fidelity(ground_a: np.ndarray, ground_b: np.ndarray, dlam: float, N: int) -> float:
    """Ground-state fidelity susceptibility (2/N)(1 - |<a|b>|)/dlam^2."""
    if dlam == 0:
        raise ValueError("dlam must be nonzero")
    a = np.asarray(ground_a)
    b = np.asarray(ground_b)
    if a.shape != b.shape:
        raise ValueError("states live in different sectors")
    overlap = abs(np.vdot(a, b))
    return (2.0 / N) * (1.0 - min(overlap, 1.0)) / dlam ** 2


def fidelity_subspace(multiplet_a: np.ndarray, multiplet_b: np.ndarray,
                      dlam: float, N: int) -> float:
    """Fidelity between (near-)degenerate ground multiplets.

    Uses the largest principal-angle overlap, i.e. the top singular value of
    the cross-Gram matrix; reduces to the single-vector formula when both
    multiplets are one-dimensional.
    """
    if dlam == 0:
        raise ValueError("dlam must be nonzero")
    if multiplet_a.shape[0] != multiplet_b.shape[0]:
        raise ValueError("multiplets live in different sectors")
    gram = multiplet_a.conj().T @ multiplet_b
    s = np.linalg.svd(gram, compute_uv=False)
    overlap = float(s[0]) if s.size else 0.0
    return (2.0 / N) * (1.0 - min(overlap, 1.0)) / dlam ** 2


# --- report -----------------------------------------------------------------

@dataclass
class ObservableReport:
    """Everything measured at one parameter point."""

    params: ModelParams
    energy: float
    density: np.ndarray
    corr1: np.ndarray
    g2: np.ndarray
    g2_multiplet: np.ndarray | None
    current_nn_paper: np.ndarray
    current_nn_continuity: np.ndarray
    current_nnn_paper: np.ndarray
    current_nnn_continuity: np.ndarray
    nn_bonds: list[int]
    nnn_bonds: list[int]
    plaquettes: list[int]
    flux_mean: np.ndarray
    flux_var: np.ndarray
    chi: float | None
    fidelity: float | None = None
    multiplet_dim: int = 1
    meta: dict = field(default_factory=dict)

    def check(self) -> None:
        assert abs(self.density.sum() - self.params.N) < 1e-10
        assert np.allclose(self.corr1, self.corr1.conj().T, atol=1e-12)
        assert np.allclose(np.diag(self.corr1).real, self.density, atol=1e-12)

    def to_json_dict(self) -> dict:
        p = self.params
        return {
            "schema_version": 1,
            "params": {"L": p.L, "N": p.N, "g": p.g, "eta": p.eta, "J": p.J,
                       "boundary": p.boundary},
            "energy": self.energy,
            "multiplet_dim": self.multiplet_dim,
            "density": self.density.tolist(),
            "corr1_re": self.corr1.real.tolist(),
            "corr1_im": self.corr1.imag.tolist(),
            "g2": self.g2.tolist(),
            "g2_multiplet": None if self.g2_multiplet is None else self.g2_multiplet.tolist(),
            "nn_bonds": self.nn_bonds,
            "current_nn_paper": self.current_nn_paper.tolist(),
            "current_nn_continuity": self.current_nn_continuity.tolist(),
            "nnn_bonds": self.nnn_bonds,
            "current_nnn_paper": self.current_nnn_paper.tolist(),
            "current_nnn_continuity": self.current_nnn_continuity.tolist(),
            "plaquettes": self.plaquettes,
            "flux_mean": self.flux_mean.tolist(),
            "flux_var": self.flux_var.tolist(),
            "chi": self.chi,
            "fidelity": self.fidelity,
            "meta": self.meta,
        }


def nn_bonds(params: ModelParams) -> list[int]:
    return list(range(params.L if params.pbc else params.L - 1))


def nnn_bonds(params: ModelParams) -> list[int]:
    return list(range(params.L if params.pbc else params.L - 2))


def compute_report(params: ModelParams, sector: BasisSector, psi: np.ndarray,
                   energy: float, multiplet: np.ndarray | None = None,
                   fidelity_value: float | None = None,
                   meta: dict | None = None) -> ObservableReport:
    psi = _check_state(psi, sector)
    bonds1 = nn_bonds(params)
    bonds2 = nnn_bonds(params)
    inn_p = np.array([current_nn(psi, sector, params, j, "paper") for j in bonds1])
    inn_c = np.array([current_nn(psi, sector, params, j, "continuity") for j in bonds1])
    innn_p = np.array([current_nnn(psi, sector, params, j, "paper") for j in bonds2])
    innn_c = np.array([current_nnn(psi, sector, params, j, "continuity") for j in bonds2])
    js, fmean, fvar = flux_profile(psi, sector, params)
    mdim = 1 if multiplet is None else multiplet.shape[1]
    chi = None
    if not params.pbc and params.L >= 9:
        chi = chi_order(psi, sector, params)
    report = ObservableReport(
        params=params,
        energy=energy,
        density=density(psi, sector),
        corr1=corr1(psi, sector),
        g2=g2(psi, sector, params),
        g2_multiplet=(g2_multiplet(multiplet, sector, params)
                      if multiplet is not None and mdim > 1 else None),
        current_nn_paper=inn_p,
        current_nn_continuity=inn_c,
        current_nnn_paper=innn_p,
        current_nnn_continuity=innn_c,
        nn_bonds=bonds1,
        nnn_bonds=bonds2,
        plaquettes=js,
        flux_mean=fmean,
        flux_var=fvar,
        chi=chi,
        fidelity=fidelity_value,
        multiplet_dim=mdim,
        meta=meta or {},
    )
    report.check()
    return report

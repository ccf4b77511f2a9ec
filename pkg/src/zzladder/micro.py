"""Microscopic origin of the lattice model: three dipole-coupled Rydberg atoms.

Wigner 3j/6j symbols are evaluated with exact integer/rational arithmetic
(factorial sums as fractions.Fraction), converted to float only on output,
so no cancellation error enters the dipole matrix elements.  The zig-zag
triangle has vertices

    r1 = (0, 0),   r2 = R (cos a, sin a),   r3 = (2 R cos a, 0)

so the two legs both have length R and polar angles +a and -a; at a = pi/3
the triangle is equilateral.  Adiabatic elimination of the detuned |+> level
then produces density-dependent hops with h_{1->2->3} = 27 J^2 e^{-4ia} and
the dimensionless second-order coupling g = 27 J / (2 Delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

MAX_J = 20  # rational factorial arithmetic validated up to here


def _two(j, name="j") -> int:
    t = round(2 * j)
    if abs(2 * j - t) > 1e-9:
        raise ValueError(f"{name}={j} is not a half-integer")
    return int(t)


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial")
    return math.factorial(n)


def _triangle_ok(tj1: int, tj2: int, tj3: int) -> bool:
    return (abs(tj1 - tj2) <= tj3 <= tj1 + tj2) and (tj1 + tj2 + tj3) % 2 == 0


def _delta_sq(tj1: int, tj2: int, tj3: int) -> Fraction:
    """Triangle coefficient squared, exact."""
    return Fraction(
        _fact((tj1 + tj2 - tj3) // 2) * _fact((tj1 - tj2 + tj3) // 2)
        * _fact((-tj1 + tj2 + tj3) // 2),
        _fact((tj1 + tj2 + tj3) // 2 + 1),
    )


def wigner3j_signed_square(j1, j2, j3, m1, m2, m3) -> tuple[int, Fraction]:
    """(sign, value^2) of the 3j symbol, exact; sign is 0 when the value vanishes."""
    tj = [_two(j, "j") for j in (j1, j2, j3)]
    tm = [_two(m, "m") for m in (m1, m2, m3)]
    if max(tj) > 2 * MAX_J:
        raise ValueError(f"angular momenta above j={MAX_J} not supported")
    if tm[0] + tm[1] + tm[2] != 0 or not _triangle_ok(*tj):
        return 0, Fraction(0)
    for t_j, t_m in zip(tj, tm):
        if abs(t_m) > t_j or (t_j - t_m) % 2:
            return 0, Fraction(0)
    tj1, tj2, tj3 = tj
    tm1, tm2, tm3 = tm
    tmin = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    tmax = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    s = Fraction(0)
    for t in range(tmin, tmax + 1):
        den = (_fact(t)
               * _fact((tj1 + tj2 - tj3) // 2 - t)
               * _fact((tj1 - tm1) // 2 - t)
               * _fact((tj2 + tm2) // 2 - t)
               * _fact((tj3 - tj2 + tm1) // 2 + t)
               * _fact((tj3 - tj1 - tm2) // 2 + t))
        s += Fraction((-1) ** t, den)
    if s == 0:
        return 0, Fraction(0)
    pref = _delta_sq(tj1, tj2, tj3)
    for t_j, t_m in zip(tj, tm):
        pref *= _fact((t_j + t_m) // 2) * _fact((t_j - t_m) // 2)
    phase = (-1) ** ((tj1 - tj2 - tm3) // 2)
    sign = phase * (1 if s > 0 else -1)
    return sign, pref * s * s


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """3j symbol via Racah's factorial sum; exact inside, float on the way out."""
    sign, sq = wigner3j_signed_square(j1, j2, j3, m1, m2, m3)
    return sign * math.sqrt(float(sq))


def wigner6j_signed_square(j1, j2, j3, j4, j5, j6) -> tuple[int, Fraction]:
    tj = [_two(j, "j") for j in (j1, j2, j3, j4, j5, j6)]
    if max(tj) > 2 * MAX_J:
        raise ValueError(f"angular momenta above j={MAX_J} not supported")
    a, b, c, d, e, f = tj
    triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)]
    if not all(_triangle_ok(*t) for t in triads):
        return 0, Fraction(0)
    t1 = (a + b + c) // 2
    t2 = (a + e + f) // 2
    t3 = (d + b + f) // 2
    t4 = (d + e + c) // 2
    q1 = (a + b + d + e) // 2
    q2 = (b + c + e + f) // 2
    q3 = (a + c + d + f) // 2
    s = Fraction(0)
    for t in range(max(t1, t2, t3, t4), min(q1, q2, q3) + 1):
        den = (_fact(t - t1) * _fact(t - t2) * _fact(t - t3) * _fact(t - t4)
               * _fact(q1 - t) * _fact(q2 - t) * _fact(q3 - t))
        s += Fraction((-1) ** t * _fact(t + 1), den)
    if s == 0:
        return 0, Fraction(0)
    pref = Fraction(1)
    for t in triads:
        pref *= _delta_sq(*t)
    return (1 if s > 0 else -1), pref * s * s


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    sign, sq = wigner6j_signed_square(j1, j2, j3, j4, j5, j6)
    return sign * math.sqrt(float(sq))


# --- dipole matrix elements -------------------------------------------------

@dataclass(frozen=True)
class AngularState:
    """|S L J M> angular state of one atom; label is for bookkeeping only."""

    S: float
    L: float
    J: float
    M: float
    label: str = ""

    def __post_init__(self):
        if abs(self.M) > self.J + 1e-12:
            raise ValueError(f"|M| > J for {self}")
        if not (abs(self.L - self.S) - 1e-12 <= self.J <= self.L + self.S + 1e-12):
            raise ValueError(f"J outside |L-S|..L+S for {self}")


ELECTRON_CHARGE = 1.0  # e, unit charge; q = -e multiplies C_{1,p}
RADIAL_INTEGRAL = 1.0  # xi, common to all transitions here


def spherical_element(bra: AngularState, ket: AngularState, k: int, p: int) -> float:
    """<bra| C_{k,p} |ket> via the 3j/3j/6j reduction; zero unless S is conserved."""
    if _two(bra.S) != _two(ket.S):
        return 0.0
    pref = math.sqrt((2 * bra.J + 1) * (2 * ket.J + 1)
                     * (2 * bra.L + 1) * (2 * ket.L + 1))
    phase = (-1) ** round(bra.M - bra.S)
    return (pref * phase
            * wigner3j(bra.J, ket.J, k, -bra.M, ket.M, p)
            * wigner3j(bra.L, k, ket.L, 0, 0, 0)
            * wigner6j(bra.L, ket.L, k, ket.J, bra.J, bra.S))


def dipole_element(bra: AngularState, ket: AngularState, component: str) -> float:
    """<bra| d^component |ket> in units of e*xi, component in {'+', '-', 'z'}."""
    p = {"+": 1, "-": -1, "z": 0}[component]
    q = -ELECTRON_CHARGE
    return q * spherical_element(bra, ket, 1, p) * RADIAL_INTEGRAL


# --- level scheme -----------------------------------------------------------

TARGET_ELEMENTS = {
    ("0", "-", "+"): 1 / math.sqrt(3),
    ("1", "-", "0"): -1 / 3,
    ("0", "+", "1"): 1 / 3,
    ("+", "+", "0"): -1 / math.sqrt(3),
}


@dataclass(frozen=True)
class LevelScheme:
    """The three working states: |0> from nS_1/2, |1> and |+> from nP_3/2."""

    state0: AngularState
    state1: AngularState
    statep: AngularState

    def state(self, label: str) -> AngularState:
        return {"0": self.state0, "1": self.state1, "+": self.statep}[label]

    def element(self, bra_label: str, component: str, ket_label: str) -> float:
        return dipole_element(self.state(bra_label), self.state(ket_label), component)

    def dipole_matrices(self) -> dict[str, np.ndarray]:
        """3x3 one-atom matrices of d^z, d^+, d^- in the basis (|0>, |1>, |+>)."""
        labels = ("0", "1", "+")
        out = {}
        for comp in ("z", "+", "-"):
            m = np.zeros((3, 3))
            for i, bl in enumerate(labels):
                for j, kl in enumerate(labels):
                    m[i, j] = self.element(bl, comp, kl)
            out[comp] = m
        return out


@lru_cache(maxsize=1)
def default_level_scheme() -> LevelScheme:
    """Magnetic quantum numbers found by exhaustive search over the manifolds.

    The published matrix-element values fix the assignment only up to the
    search; whichever (M0, M1, M+) reproduces all four values exactly is used.
    """
    halves = [Fraction(n, 2) for n in (-1, 1)]
    p_ms = [Fraction(n, 2) for n in (-3, -1, 1, 3)]
    for m0, m1, mp in product(halves, p_ms, p_ms):
        if m1 == mp:
            continue
        scheme = LevelScheme(
            state0=AngularState(S=0.5, L=0.0, J=0.5, M=float(m0), label="0"),
            state1=AngularState(S=0.5, L=1.0, J=1.5, M=float(m1), label="1"),
            statep=AngularState(S=0.5, L=1.0, J=1.5, M=float(mp), label="+"),
        )
        if all(abs(scheme.element(b, c, k) - v) < 1e-12
               for (b, c, k), v in TARGET_ELEMENTS.items()):
            return scheme
    raise RuntimeError("no magnetic-quantum-number assignment matches the "
                       "reference dipole elements")


# --- pair interaction and the triangle --------------------------------------

@dataclass(frozen=True)
class TriangleSetup:
    """Zig-zag triangle geometry plus level energies.

    R is the leg length, alpha the leg polar angle (equilateral at pi/3),
    Delta the detuning of |+>, omega the |1>-|0> splitting (needed only by
    the exact three-atom model).
    """

    R: float = 1.0
    alpha: float = math.pi / 3
    Delta: float = 1000.0
    omega: float = 0.0
    eps0: float = 1.0

    def positions(self) -> np.ndarray:
        return np.array([
            [0.0, 0.0],
            [self.R * math.cos(self.alpha), self.R * math.sin(self.alpha)],
            [2 * self.R * math.cos(self.alpha), 0.0],
        ])

    def pair_geometry(self, i: int, j: int) -> tuple[float, float]:
        """(distance, polar angle) of the bond i -> j; atoms must not coincide."""
        r = self.positions()
        d = r[j] - r[i]
        dist = float(np.hypot(*d))
        if dist < 1e-12:
            raise ValueError(f"atoms {i} and {j} coincide")
        return dist, float(math.atan2(d[1], d[0]))


def pair_interaction(setup: TriangleSetup, i: int, j: int,
                     scheme: LevelScheme | None = None) -> np.ndarray:
    """9x9 dipole-dipole block for atoms i, j in the basis (|0>,|1>,|+>)^2.

    Contains the d^z d^z part, the resonant flip-flop, and the
    double-(de)excitation terms carrying e^{-+ 2 i phi_ij}.
    """
    scheme = scheme or default_level_scheme()
    dist, phi = setup.pair_geometry(i, j)
    d = scheme.dipole_matrices()
    pref = 1.0 / (4 * math.pi * setup.eps0 * dist ** 3)
    dz, dp, dm = d["z"], d["+"], d["-"]
    v = (np.kron(dz, dz)
         + 0.5 * (np.kron(dp, dm) + np.kron(dm, dp))
         - 1.5 * (np.kron(dp, dp) * np.exp(-2j * phi)
                  + np.kron(dm, dm) * np.exp(2j * phi)))
    return pref * v


def energy_scale(setup: TriangleSetup, scheme: LevelScheme | None = None) -> float:
    """Direct hopping rate J = -<0 1|V_12|1 0> = e^2 xi^2 / (72 pi eps0 R^3)."""
    scheme = scheme or default_level_scheme()
    v12 = pair_interaction(setup, 0, 1, scheme)
    idx = {"0": 0, "1": 1, "+": 2}
    bra = 3 * idx["0"] + idx["1"]
    ket = 3 * idx["1"] + idx["0"]
    return float(-v12[bra, ket].real)


def _embed_pair(v: np.ndarray, i: int, j: int) -> np.ndarray:
    """Lift a 9x9 two-atom block to the 27-dim three-atom space."""
    out = np.zeros((27, 27), dtype=complex)
    for a in range(27):
        ka = (a // 9, (a // 3) % 3, a % 3)
        for b in range(27):
            kb = (b // 9, (b // 3) % 3, b % 3)
            other = [t for t in range(3) if t not in (i, j)][0]
            if ka[other] != kb[other]:
                continue
            out[a, b] = v[3 * ka[i] + ka[j], 3 * kb[i] + kb[j]]
    return out


def exact_hamiltonian(setup: TriangleSetup,
                      scheme: LevelScheme | None = None) -> np.ndarray:
    """Full 27-level three-atom Hamiltonian (each pair counted once)."""
    scheme = scheme or default_level_scheme()
    h = np.zeros((27, 27), dtype=complex)
    for atom in range(3):
        for level, e in ((1, setup.omega), (2, setup.omega + setup.Delta)):
            for a in range(27):
                ka = (a // 9, (a // 3) % 3, a % 3)
                if ka[atom] == level:
                    h[a, a] += e
    for i in range(3):
        for j in range(i + 1, 3):
            h += _embed_pair(pair_interaction(setup, i, j, scheme), i, j)
    return h


def _single_excitation_index(atom: int) -> int:
    digits = [0, 0, 0]
    digits[atom] = 1
    return 9 * digits[0] + 3 * digits[1] + digits[2]


def _plus_index(atom: int) -> int:
    digits = [0, 0, 0]
    digits[atom] = 2
    return 9 * digits[0] + 3 * digits[1] + digits[2]


def indirect_hop(setup: TriangleSetup, i: int, j: int, k: int,
                 scheme: LevelScheme | None = None) -> complex:
    """h_{i->j->k}: |1> at i hops to |1> at k through the virtual |+> at j."""
    scheme = scheme or default_level_scheme()
    h = exact_hamiltonian(setup, scheme)
    mid = _plus_index(j)
    return complex(h[_single_excitation_index(k), mid]
                   * h[mid, _single_excitation_index(i)])


def adiabatic_eliminate(setup: TriangleSetup,
                        scheme: LevelScheme | None = None) -> np.ndarray:
    """Effective 3x3 single-excitation Hamiltonian to first order in 1/Delta.

    Direct flip-flops plus -(1/Delta) (U_i on the diagonal, h_{i->j->k}
    off-diagonal); energies are measured from the single-excitation reference.
    """
    if setup.Delta == 0:
        raise ValueError("Delta must be nonzero")
    scheme = scheme or default_level_scheme()
    h = exact_hamiltonian(setup, scheme)
    idx = [_single_excitation_index(a) for a in range(3)]
    heff = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for k in range(3):
            if i != k:
                heff[k, i] += h[idx[k], idx[i]]
    for i in range(3):
        for k in range(3):
            for j in range(3):
                if j in (i, k):
                    continue
                heff[k, i] -= indirect_hop(setup, i, j, k, scheme) / setup.Delta
    return heff


def single_excitation_exact(setup: TriangleSetup,
                            scheme: LevelScheme | None = None) -> np.ndarray:
    """The three exact eigenvalues adiabatically connected to one |1> excitation."""
    scheme = scheme or default_level_scheme()
    h = exact_hamiltonian(setup, scheme)
    w, v = np.linalg.eigh(h)
    idx = [_single_excitation_index(a) for a in range(3)]
    weight = (np.abs(v[idx, :]) ** 2).sum(axis=0)
    sel = np.sort(np.argsort(weight)[-3:])
    return np.sort(w[sel])


def elimination_error(setup: TriangleSetup,
                      scheme: LevelScheme | None = None) -> float:
    """max |eig(omega + H_eff) - exact single-excitation eigenvalues|."""
    scheme = scheme or default_level_scheme()
    approx = np.sort(np.linalg.eigvalsh(adiabatic_eliminate(setup, scheme))) + setup.omega
    exact = single_excitation_exact(setup, scheme)
    return float(np.max(np.abs(approx - exact)))


def elimination_error_scan(deltas_over_j, alpha: float = math.pi / 3,
                           omega_over_j: float = 1e9,
                           scheme: LevelScheme | None = None) -> list[dict]:
    """Error of the effective model versus detuning; slope -2 on a log-log plot."""
    scheme = scheme or default_level_scheme()
    base = TriangleSetup(alpha=alpha)
    j = energy_scale(base, scheme)
    rows = []
    for r in deltas_over_j:
        setup = TriangleSetup(alpha=alpha, Delta=r * j, omega=omega_over_j * j)
        rows.append({
            "delta_over_J": float(r),
            "g": 27.0 / (2.0 * float(r)),
            "error_over_J": elimination_error(setup, scheme) / j,
        })
    return rows


# --- triangle many-body model ------------------------------------------------

_LEVI = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
         (2, 1, 0): -1, (0, 2, 1): -1, (1, 0, 2): -1}


def triangle_model(setup: TriangleSetup, g: float, J: float = 1.0) -> np.ndarray:
    """Hard-core boson model on the triangle (8-dim Fock space).

    Direct hops at rate J, density-gated hops 2gJ with phases
    e^{-4 i eps_{ijk} alpha}, and the nearest-neighbour repulsion
    -2gJ n_i (1 - n_k); matches the eliminated model in both the one- and
    two-excitation sectors (where all h_{i->j->k} vanish).
    """
    b = np.array([[0, 1], [0, 0]], dtype=complex)  # <0|b|1> = 1
    bd = b.T.conj()
    n = bd @ b
    eye = np.eye(2, dtype=complex)

    def site_op(op, atom):
        mats = [eye, eye, eye]
        mats[atom] = op
        # bit a of the Fock index is atom a (atom 0 fastest-running)
        return np.kron(np.kron(mats[2], mats[1]), mats[0])

    h = np.zeros((8, 8), dtype=complex)
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            h += -J * site_op(bd, i) @ site_op(b, j)
            k = 3 - i - j
            phase = np.exp(-4j * _LEVI[(i, j, k)] * setup.alpha)
            hole = np.eye(8) - site_op(n, k)
            h += -2 * g * J * phase * site_op(bd, i) @ site_op(b, j) @ hole
            h += -2 * g * J * site_op(n, i) @ (np.eye(8) - site_op(n, j))
    return h

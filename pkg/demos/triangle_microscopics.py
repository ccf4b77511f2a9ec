#!/usr/bin/env python3
"""From three dipole-coupled atoms to the lattice model's coupling constants.

Walks through the microscopic layer: exact dipole matrix elements from
Wigner algebra, the direct hopping rate J, the complex three-site process
h_{1->2->3} = 27 J^2 e^{-4 i alpha}, and the accuracy of eliminating the
detuned |+> level.
"""

import math

import numpy as np

from zzladder import micro


def main():
    scheme = micro.default_level_scheme()
    print("=" * 64)
    print("Dipole matrix elements (units of e*xi)")
    print("=" * 64)
    for lbl in ("0", "1", "+"):
        s = scheme.state(lbl)
        print(f"  |{lbl}>  = |S={s.S}, L={s.L}, J={s.J}, M={s.M:+.1f}>")
    for (b, c, k) in (("0", "-", "+"), ("1", "-", "0"), ("0", "+", "1"), ("+", "+", "0")):
        print(f"  <{b}| d^{c} |{k}> = {scheme.element(b, c, k):+.10f}")

    setup = micro.TriangleSetup()
    j = micro.energy_scale(setup)
    print(f"\nDirect hop J = {j:.8g}  (= 1/(72 pi R^3) = {1/(72*math.pi):.8g})")

    print("\nThree-site process h_(1->2->3) against 27 J^2 e^(-4 i alpha):")
    for alpha in (math.pi / 3, 0.5, 0.9):
        s = micro.TriangleSetup(alpha=alpha)
        jj = micro.energy_scale(s)
        h = micro.indirect_hop(s, 0, 1, 2)
        print(f"  alpha={alpha:5.3f}: |h|/J^2 = {abs(h)/jj**2:9.6f}, "
              f"arg(h)/(-4 alpha) = {np.angle(h)/(-4*alpha):+.6f}")

    print("\nAdiabatic elimination error versus detuning (omega >> Delta >> J):")
    rows = micro.elimination_error_scan(np.geomspace(500, 5000, 6))
    print(f"  {'Delta/J':>10} {'g':>10} {'max |dE|/J':>12}")
    for r in rows:
        print(f"  {r['delta_over_J']:10.1f} {r['g']:10.5f} {r['error_over_J']:12.3e}")
    x = np.log([r["delta_over_J"] for r in rows])
    y = np.log([r["error_over_J"] for r in rows])
    print(f"  log-log slope: {np.polyfit(x, y, 1)[0]:+.3f}  (second-order elimination)")

    print("\nTriangle many-body model vs the eliminated single-excitation block:")
    s = micro.TriangleSetup(Delta=1000.0)
    jj = micro.energy_scale(s)
    g = 27 * jj / (2 * s.Delta)
    heff = micro.adiabatic_eliminate(s)
    tri = micro.triangle_model(s, g, J=jj)
    idx = [0b001, 0b010, 0b100]
    block = tri[np.ix_(idx, idx)]
    print(f"  g = 27 J / (2 Delta) = {g:.6f}")
    print(f"  max |H_triangle - H_eff| = {np.abs(block - heff).max():.3e}")


if __name__ == "__main__":
    main()

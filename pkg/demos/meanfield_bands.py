#!/usr/bin/env python3
"""Mean-field bands, the Fermi level, and the folded-zone crossing.

Uniform half filling turns the model quadratic: -(1-g)J inter-chain hops
plus pure Peierls phases along the chains.  The two bands never gap at the
zone edge; folding into the four-site zone makes the lowest sub-bands cross
at g* = 1/(1+sqrt(3)) ~ 0.366, the mean-field echo of the first liquid
transition.
"""

import numpy as np

from zzladder.meanfield import (BlochModel, bands, fermi_level, folded_bands,
                                folded_crossing, realspace_density,
                                realspace_spectrum, sampled_momenta)


def main():
    ks = np.linspace(-np.pi, np.pi, 9)
    for g in (0.2, 0.5, 0.8):
        model = BlochModel(g=g)
        lo, hi = bands(model, ks)
        ef = fermi_level(model)
        print(f"g={g}: E_F = {ef:+.4f}")
        for k, a, b in zip(ks, lo, hi):
            occ = "x" if a <= ef else "."
            print(f"   k={k:+5.2f}  E- = {a:+7.4f} {occ}   E+ = {b:+7.4f}")

    model = BlochModel(g=0.5)
    L = 64
    sampled = np.sort(np.concatenate(bands(model, sampled_momenta(L))))
    exact = np.sort(realspace_spectrum(model, L))
    print(f"\nreal-space oracle (L={L}): max deviation "
          f"{np.abs(sampled - exact).max():.2e}")

    g_star = folded_crossing(0.05, 0.9)
    print(f"folded-zone crossing: g* = {g_star:.5f} "
          f"(analytic 1/(1+sqrt3) = {1/(1+np.sqrt(3)):.5f})")

    kf = np.linspace(-np.pi / 2, np.pi / 2, 513)[1:-1]  # branches meet at the edges
    for g in (0.3, 0.4):
        branches = folded_bands(BlochModel(g=g), kf)
        d = branches[0] - branches[1]
        crossing = bool(np.any(np.sign(d[:-1]) * np.sign(d[1:]) < 0))
        print(f"g={g}: lowest folded sub-bands cross inside the zone: {crossing}")

    dens = realspace_density(BlochModel(g=1.0), 20, "obc")
    print(f"\ndecoupled chains at g=1 (OBC, L=20): max |n - 1/2| = "
          f"{np.abs(dens - 0.5).max():.2e}  (exactly flat)")
    dens2 = realspace_density(BlochModel(g=0.5), 20, "obc")
    print(f"g=0.5 Friedel oscillations:            max |n - 1/2| = "
          f"{np.abs(dens2 - 0.5).max():.4f}")


if __name__ == "__main__":
    main()

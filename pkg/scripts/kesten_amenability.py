#!/usr/bin/env python3
"""Kesten's criterion on both sides of the amenability divide.

The reduced norm of the generator indicator equals the number of generators
exactly when the group is amenable: Z^2 passes (interval pinned at 4 by the
torus Fourier oracle), while the rank-2 free group comes out near
2 sqrt(3) ~ 3.46, certifiably below 4 (tree walk counts for the lower bound,
the layerwise free-group inequality for the upper one).
"""

import math

from spectral_gamma import groups, spectra


def main():
    z2 = groups.integer_lattice(2)
    rep = spectra.kesten_check(set(groups.generators(z2)), z2, grid=4096)
    print(f"Z^2, 4 generators [{rep.method}]")
    print(f"  ||chi_S|| in [{rep.radius.lower:.6f}, {rep.radius.upper:.6f}], #S = 4")
    print(f"  amenable-consistent: {rep.amenable_consistent}")

    f2 = groups.free_group(2)
    rep = spectra.kesten_check(set(groups.generators(f2)), f2, n_max=512)
    print(f"F_2, 4 generators [{rep.method}]")
    print(f"  ||chi_S|| in [{rep.radius.lower:.6f}, {rep.radius.upper:.6f}], "
          f"2 sqrt(3) = {2 * math.sqrt(3):.6f}")
    print(f"  amenable-consistent: {rep.amenable_consistent}")
    print("  trace (n, moment root):")
    for n, v in rep.radius.trace[-5:]:
        print(f"    {n:5d}  {v:.6f}")


if __name__ == "__main__":
    main()

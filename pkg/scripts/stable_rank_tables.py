#!/usr/bin/env python3
"""Print the closed-form stable-rank table over tori, spheres and cubes.

csr_k(C(T^d)) = ceil((d+k)/2) + 1; the same formula holds for spheres except
csr(C(S^2)) = 1; cubes are contractible so only k matters.  The last columns
give the matrix sizes where K_1 and K_0 stabilize.
"""

from spectral_gamma import ranks


def main():
    spaces = ([ranks.torus(d) for d in range(1, 7)]
              + [ranks.sphere(d) for d in range(1, 7)]
              + [ranks.cube(k) for k in range(1, 7)])
    rows = ranks.rank_table(spaces, range(0, 7))
    header = ("space", "k", "csr_k", "bound", "tsr", "hsr", "n(K1)", "n(K0)")
    print(("{:>10} {:>3} {:>6} {:>6} {:>4} {:>9} {:>6} {:>6}").format(*header))
    for r in rows:
        hsr = f"[{r['hsr_lower']},{r['hsr_upper']}]"
        star = "" if r["csr_k_provenance"] == "exact-formula" else "*"
        print(f"{r['space']:>10} {r['k']:>3} {str(r['csr_k']) + star:>6} "
              f"{r['csr_upper_bound']:>6} {r['tsr']:>4} {hsr:>9} "
              f"{r['k1_threshold']:>6} {r['k0_threshold']:>6}")
    print("(* = dimensional upper bound only)")


if __name__ == "__main__":
    main()

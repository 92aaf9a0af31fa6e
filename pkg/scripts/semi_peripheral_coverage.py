"""How much of the semi-peripheral set of natural l_inf^n is reached by
u = alpha (e - w) + (1 - alpha) w with w peripheral?

Generated points have every coordinate in {alpha, 1 - alpha}; for n >= 3
this misses most semi-peripheral elements, e.g. (0.7, 0.5, 0.3).
"""

import argparse

import numpy as np

from orderunit.adjoin import linf_peripheral_elements, semi_peripheral_check
from orderunit.order import linf_natural


def reachable(u):
    # coordinates must take at most two values alpha, 1 - alpha
    vals = np.unique(np.round(u, 9))
    if len(vals) == 1:
        return abs(vals[0] - 0.5) < 1e-9
    return len(vals) == 2 and abs(vals.sum() - 1.0) < 1e-9


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for n in range(2, 6):
        V = linf_natural(n)
        semi = hit = 0
        for _ in range(args.samples):
            # semi-peripheral in l_inf^n: max u = 1 - min u
            u = rng.uniform(0, 1, n)
            a = rng.uniform(0.5, 1.0)
            u = (1 - a) + (2 * a - 1) * (u - u.min()) / (u.max() - u.min())
            if semi_peripheral_check(V, u):
                semi += 1
                hit += reachable(u)
        print(f"n = {n}: |R_V| = {len(linf_peripheral_elements(n))}, semi-peripheral samples {semi}, reachable {hit}")


if __name__ == "__main__":
    main()

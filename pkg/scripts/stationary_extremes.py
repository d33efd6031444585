#!/usr/bin/env python3
"""Stationary-extreme exponents across sizes.

For each n, prints the mean of -log_n(pi_max) and -log_n(pi_min) over
seeded trials; the first approaches 1 and the second 1 + eta_r as n grows.

    python scripts/stationary_extremes.py --sizes 4096,32768 --trials 20
"""

import argparse
import time

import numpy as np

from routgraph import generate, scc_decompose, solve_constants, stationary_power
from routgraph.rng import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--sizes", default="4096,32768")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20250810)
    args = ap.parse_args()

    target = 1.0 + solve_constants(args.r).eta_r
    print(f"# r={args.r}, exp_max -> 1, exp_min -> 1+eta_r = {target:.6f}")
    print("n,trials,exp_max_mean,exp_max_se,exp_min_mean,exp_min_se,seconds")
    for n in (int(tok) for tok in args.sizes.split(",")):
        t0 = time.time()
        e_max, e_min = [], []
        for t in range(args.trials):
            g = generate(n, args.r, derive_seed(args.seed, n, args.r, t))
            dec = scc_decompose(g)
            if not (dec.attractive and dec.period == 1):
                continue
            prof = stationary_power(g, dec)
            e_max.append(prof.exp_max)
            e_min.append(prof.exp_min)
        e_max, e_min = np.array(e_max), np.array(e_min)
        k = len(e_max)
        print(
            f"{n},{k},{e_max.mean():.4f},{e_max.std(ddof=1) / np.sqrt(k):.4f},"
            f"{e_min.mean():.4f},{e_min.std(ddof=1) / np.sqrt(k):.4f},"
            f"{time.time() - t0:.1f}"
        )


if __name__ == "__main__":
    main()

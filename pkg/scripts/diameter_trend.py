#!/usr/bin/env python3
"""Diameter growth experiment: how diam(D)/log_r(n) approaches 1 + eta_r.

Runs seeded trials over a geometric ladder of sizes and prints per-size
median and mean of the normalized diameter next to the limit constant.

    python scripts/diameter_trend.py --r 2 --sizes 4096,16384,65536 --trials 20
"""

import argparse
import math
import sys
import time

import numpy as np

from routgraph import diameter, generate, solve_constants
from routgraph.rng import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--sizes", default="4096,16384,65536")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20250810)
    args = ap.parse_args()

    sizes = [int(tok) for tok in args.sizes.split(",")]
    target = 1.0 + solve_constants(args.r).eta_r
    print(f"# r={args.r}, limit constant 1+eta_r = {target:.6f}")
    print("n,trials,median_diam,median_norm,mean_norm,seconds")
    for n in sizes:
        t0 = time.time()
        vals = []
        for t in range(args.trials):
            g = generate(n, args.r, derive_seed(args.seed, n, args.r, t))
            vals.append(diameter(g).value)
        norm = np.array(vals) / (math.log(n) / math.log(args.r))
        print(
            f"{n},{args.trials},{np.median(vals):.1f},{np.median(norm):.4f},"
            f"{norm.mean():.4f},{time.time() - t0:.1f}"
        )
        sys.stdout.flush()


if __name__ == "__main__":
    main()

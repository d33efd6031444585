#!/usr/bin/env python3
"""Census of slippery towers (thin tree in-neighbourhoods) at bench scale.

Scans seeded instances for vertices whose in-neighbourhood stays a tree
until one layer reaches the threshold at depth >= k_star, then checks the
maze-hardness and stationary-mass consequences on each find.

    python scripts/tower_census.py --n 65536 --trials 10 --threshold 12
"""

import argparse
import math
import time

import numpy as np

from routgraph import (
    FlagParams,
    find_flags,
    generate,
    maze_hardness,
    scc_decompose,
    stationary_power,
)
from routgraph.rng import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=65536)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--threshold", type=int, default=None,
                    help="layer threshold (default ceil(ln n); the "
                         "asymptotic ceil(ln^4 n) admits no towers at "
                         "bench sizes)")
    ap.add_argument("--seed", type=int, default=20250810)
    args = ap.parse_args()

    threshold = args.threshold or math.ceil(math.log(args.n))
    params = FlagParams.for_graph(args.n, args.r, epsilon=args.eps,
                                  threshold=threshold)
    print(f"# k_star={params.k_star} threshold={params.threshold} "
          f"size_cap={params.size_cap}")
    print("trial,flags,in_d0,k1_min,k1_max,h_eq_k1,seconds")
    for t in range(args.trials):
        t0 = time.time()
        g = generate(args.n, args.r, derive_seed(args.seed, args.n, args.r, t))
        dec = scc_decompose(g)
        reports = find_flags(g, params, dec)
        h_ok = all(
            maze_hardness(g, rep.vertex, rep.k1).hardness == rep.k1
            for rep in reports
        )
        k1s = [rep.k1 for rep in reports] or [0]
        print(
            f"{t},{len(reports)},{sum(bool(r.in_d0) for r in reports)},"
            f"{min(k1s)},{max(k1s)},{int(h_ok)},{time.time() - t0:.1f}"
        )


if __name__ == "__main__":
    main()

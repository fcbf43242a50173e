#!/usr/bin/env python3
"""Time the post-embedding search against n at fixed expected degree.

The embedding is computed once per graph and excluded; the timed part is the
boundary walk, the running block counts and the criterion scan. Prints the
log-log slope of time against n (about 1 for the O(n lambda log n) cost).

    python scripts/sweep_timing.py --sizes 1000,2000,4000,8000,16000
"""

import argparse
import sys
import time

import numpy as np

from epcd.detect import ep_detect
from epcd.models import SimConfig, sample_dcsbm
from epcd.spectral import embedding


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--sizes", default="1000,2000,4000,8000")
    p.add_argument("--lam", type=float, default=15.0)
    p.add_argument("--r", type=float, default=0.3)
    p.add_argument("--criterion", default="bm")
    p.add_argument("--repeats", type=int, default=5, help="best-of timing repeats")
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    best = []
    for n in sizes:
        g, _, _ = sample_dcsbm(SimConfig(n=n, n1=n // 2, r=args.r, lam=args.lam, seed=n))
        t0 = time.perf_counter()
        emb = embedding(g)
        t_emb = time.perf_counter() - t0
        runs = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            res = ep_detect(g, args.criterion, emb=emb)
            runs.append(time.perf_counter() - t0)
        best.append(min(runs))
        print(f"n={n:<7} edges={g.num_edges:<8} embedding {t_emb * 1e3:8.1f} ms   "
              f"search {best[-1] * 1e3:8.2f} ms   candidates {res.candidates_evaluated}")
    if len(sizes) > 1:
        slope = np.polyfit(np.log(sizes), np.log(best), 1)[0]
        print(f"log-log slope of search time: {slope:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

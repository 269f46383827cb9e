#!/usr/bin/env python3
"""Cost-efficient frontiers (per-period mean vs target std) at budget 1000.

Traces alpha = 5 and alpha = 20 for both market models; the alpha = 20
curve dominates pointwise.
"""

import sys

from costeff.cli import main

COMMON = [
    "frontier",
    "--alphas=5,20",
    "--stds=10,20,30,40,50,60,70,80",
    "--budget", "1000",
    "--periods", "10",
    "--scenarios", "100000",
    "--seed", "424242",
]

if __name__ == "__main__":
    rc = main(COMMON + ["--model", "black-scholes", "-o", "frontier_bs.csv"])
    rc |= main(COMMON + ["--model", "cev", "--beta=-0.25", "--cev-steps", "1000",
                         "-o", "frontier_cev.csv"])
    print("wrote frontier_bs.csv, frontier_cev.csv")
    sys.exit(rc)

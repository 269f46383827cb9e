#!/usr/bin/env python3
"""Full-scale cost surfaces over the (alpha, std) grid for both market models.

Writes cost_surface_bs.csv and cost_surface_cev.csv into the working
directory (about a minute on a laptop; the CEV kernel dominates).
"""

import sys

from costeff.cli import main

COMMON = [
    "cost-surface",
    "--alphas=-0.9,1,5,10,20",
    "--stds=10,20,30,40,50,60,70,80",
    "--level", "100",
    "--target-mode", "scale",
    "--periods", "10",
    "--scenarios", "100000",
    "--seed", "424242",
]

if __name__ == "__main__":
    rc = main(COMMON + ["--model", "black-scholes", "-o", "cost_surface_bs.csv"])
    rc |= main(COMMON + ["--model", "cev", "--beta=-0.25", "--cev-steps", "1000",
                         "-o", "cost_surface_cev.csv"])
    print("wrote cost_surface_bs.csv, cost_surface_cev.csv")
    sys.exit(rc)

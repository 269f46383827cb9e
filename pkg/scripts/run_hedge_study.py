#!/usr/bin/env python3
"""Discrete-rebalancing replication error across rebalance frequencies.

RMS tracking error halves roughly like 1/sqrt(steps); the printed initial
capital matches the Monte Carlo price of the hedged payoff.
"""

import sys

from costeff.cli import main

if __name__ == "__main__":
    sys.exit(main([
        "hedge-sim",
        "--rebalance-grid", "32,64,128,256,512",
        "--hedge-paths", "10000",
        "--stds", "40",
        "--target-mode", "mean",
        "--level", "100",
        "--seed", "424242",
        "-o", "hedge_convergence.csv",
    ]))

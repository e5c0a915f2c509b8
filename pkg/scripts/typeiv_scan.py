"""Residual statistics of the type-IV monogamy relations over two planes.

Also samples random parameter points to look for any violated cell.
"""

import argparse

import numpy as np

from hexsteer.analysis import TABLE2, Axis, monogamy_eval, monogamy_region_scan
from hexsteer.model import CouplingStrengths, covariance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--resolution", type=int, default=201)
    ap.add_argument("--random", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    n = args.resolution
    planes = {
        "g1=1.2, (g2, g3)": (CouplingStrengths(1.2, 0.0, 0.0), Axis("g2", 0, 4, n), Axis("g3", 0, 4, n)),
        "g2=2, (g1, g3)": (CouplingStrengths(0.0, 2.0, 0.0), Axis("g1", 0, 4, n), Axis("g3", 0, 4, n)),
    }
    for t in ("IVa", "IVb"):
        inst = TABLE2[t][0]
        for label, (fixed, ax, ay) in planes.items():
            grid = monogamy_region_scan(t, inst, fixed, ax, ay)
            print(f"{t} {inst.label} {label}: min residual {grid.values.min():.3e}, "
                  f"violated cells {int((~grid.passed).sum())} of {grid.values.size}")
    rng = np.random.default_rng(args.seed)
    worst = {t: np.inf for t in ("IVa", "IVb")}
    for _ in range(args.random):
        sigma = covariance(CouplingStrengths(*rng.uniform(0, 6, 3), rng.uniform(0, 0.6)))
        for t in worst:
            worst[t] = min(worst[t], monogamy_eval(sigma, t, TABLE2[t][0]).residual)
    print(f"random points ({args.random}): " + ", ".join(f"{t} min residual {v:.3e}" for t, v in worst.items()))


if __name__ == "__main__":
    main()

"""Collective pentapartite steering windows along g3 and their best value."""

import argparse
import math

from hexsteer.analysis import Axis, CollectiveSpec, collective_region_scan, pass_intervals
from hexsteer.model import CouplingStrengths

SETTINGS = [
    ("a", CollectiveSpec(1, (2, 4, 5, 6)), CouplingStrengths(1.0, 3.2, 0.0)),
    ("b", CollectiveSpec(2, (3, 4, 5, 6)), CouplingStrengths(4.0, 2.0, 0.0)),
    ("c", CollectiveSpec(4, (2, 3, 5, 6)), CouplingStrengths(1.5, 4.0, 0.0)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=201)
    ap.add_argument("--stop", type=float, default=6.0)
    args = ap.parse_args()
    axis = Axis("g3", 0.0, args.stop, args.steps)
    qss = math.log(math.e / 2)
    for name, spec, fixed in SETTINGS:
        grid = collective_region_scan(spec, fixed, axis)
        runs = pass_intervals(axis.values(), grid.passed)
        best = grid.values.max()
        windows = ", ".join(f"[{lo:.3f}, {hi:.3f}]" for lo, hi in runs) or "none"
        print(f"({name}) {spec.label:<9} g1={fixed.g1} g2={fixed.g2}: {windows}; "
              f"max {best:.4f} ({'above' if best > qss else 'below'} ln(e/2))")


if __name__ == "__main__":
    main()

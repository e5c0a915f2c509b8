"""Locate the steering thresholds along g1 and print them next to the quoted values."""

import argparse

from hexsteer.analysis import Axis, SweepSpec, find_threshold
from hexsteer.model import CouplingStrengths
from hexsteer.steering import Bipartition

CASES = [
    # (g2, g3, a, b, predicate, quantity, quoted)
    (1.2, 2.0, "1", "3", "vanishes", "any", 1.6),
    (1.2, 2.0, "1", "2", "appears", "a_to_b", 2.6),
    (1.2, 2.0, "1", "2", "appears", "b_to_a", 3.2),
    (1.2, 2.0, "4", "5", "symmetry_crossing", "any", 1.2),
    (1.2, 2.0, "4", "5", "vanishes", "a_to_b", 2.1),
    (1.2, 2.0, "23", "6", "vanishes", "b_to_a", 2.1),
    (1.2, 2.0, "1", "23", "symmetry_crossing", "any", 0.8),
    (1.2, 2.0, "34", "1", "vanishes", "any", 1.8),
    (2.0, 1.2, "34", "5", "appears", "b_to_a", 2.5),
    (2.0, 1.2, "34", "1", "vanishes", "a_to_b", 1.9),
    (2.0, 1.2, "34", "1", "symmetry_crossing", "any", 1.5),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, default=0.3)
    ap.add_argument("--steps", type=int, default=201)
    args = ap.parse_args()
    axis = Axis("g1", 0.0, 4.0, args.steps)
    print(f"{'partition':<10} {'g2':>4} {'g3':>4} {'predicate':<18} {'quantity':<7} {'found':>8} {'quoted':>6}")
    for g2, g3, a, b, predicate, quantity, quoted in CASES:
        p = Bipartition.of(a, b)
        x = find_threshold(SweepSpec(axis, CouplingStrengths(0.0, g2, g3, args.t), (p,)), p, predicate, quantity)
        print(f"{p.label:<10} {g2:>4} {g3:>4} {predicate:<18} {quantity:<7} {x:>8.4f} {quoted:>6}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Experiment: how block lengths relate to continued fraction coefficients.

The block decomposition is defined through SL2(Z) witnesses, never through
the continued fraction expansion of the target.  This script prints both
side by side for a census of quadratic targets so the relationship can be
eyeballed; it is a recorded observation, not an invariant the library
relies on anywhere.
"""

from itertools import islice

from toric_ends import FareyPath, QuadraticTarget, Slope, decompose

TARGETS = [
    ("-sqrt(2)", QuadraticTarget.of(0, -1, 1, 2)),
    ("-sqrt(3)", QuadraticTarget.of(0, -1, 1, 3)),
    ("-sqrt(5)", QuadraticTarget.of(0, -1, 1, 5)),
    ("(-1-sqrt(2))/2", QuadraticTarget.of(-1, -1, 2, 2)),
    ("(1-2*sqrt(7))/3", QuadraticTarget.of(1, -2, 3, 7)),
    ("(-3+sqrt(13))/4", QuadraticTarget.of(-3, 1, 4, 13)),
]

N_BLOCKS = 10
N_COEFFS = 12


def main():
    start = Slope(-1, 1)
    for name, target in TARGETS:
        decomp = decompose(FareyPath(start, target))
        lengths = [decomp.block(i).length for i in range(1, N_BLOCKS + 1)]
        coeffs = list(islice(target.value.cf_coefficients(), N_COEFFS))
        print(name)
        print(f"  block lengths: {lengths}")
        print(f"  cf coefficients: {coeffs}")
        print()


if __name__ == "__main__":
    main()

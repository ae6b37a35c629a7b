#!/usr/bin/env python3
"""Generate non-extendable invariant families for a census of targets.

For each slope at infinity this builds k pairwise non-equivalent ends whose
invariants certify that no tight extension to the full half-open cylinder
exists, then cross-checks pairwise non-equivalence.
"""

from toric_ends import (
    INFINITY,
    QuadraticTarget,
    RationalTarget,
    Slope,
    equivalent,
    extension_obstruction,
    non_extendable_family,
)
from toric_ends.cli import invariant_doc

TARGETS = [
    ("oo (non-attained)", RationalTarget(INFINITY, False)),
    ("-2 (non-attained)", RationalTarget(Slope(-2, 1), False)),
    ("-5/2 (non-attained)", RationalTarget(Slope(-5, 2), False)),
    ("-sqrt(2)", QuadraticTarget.of(0, -1, 1, 2)),
    ("-sqrt(3)", QuadraticTarget.of(0, -1, 1, 3)),
]

K = 6


def main():
    for name, target in TARGETS:
        family = non_extendable_family(target, K)
        distinct = all(
            not equivalent(family[i], family[j])
            for i in range(K) for j in range(i + 1, K))
        certified = all(
            type(extension_obstruction(m)).__name__ == "NoTightExtension" for m in family)
        print(f"{name}: {K} members, pairwise distinct={distinct}, certified={certified}")
        for m in family:
            print(f"  {invariant_doc(m)}")
        print()


if __name__ == "__main__":
    main()

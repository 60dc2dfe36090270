#!/usr/bin/env python3
"""Empirical rank/n ratios of the projection solver in dimensions 2-7.

Prints achieved rank against the guaranteed divisor (3^(d/2) for even d,
2*3^((d-1)/2) for odd d) on seeded uniform instances.
"""

import sys

from tverberg.families import generate
from tverberg.projection import project_tverberg, rank_bound


def run() -> int:
    print("dim  n     rank  guarantee  achieved-ratio")
    for d in range(2, 8):
        divisor = 3 ** (d // 2) if d % 2 == 0 else 2 * 3 ** ((d - 1) // 2)
        n = divisor * (12 if d <= 4 else 4)
        ps = generate("uniform", d, n, 1000 + d)
        site = project_tverberg(ps)
        bound = rank_bound(d, n)
        print(
            f"{d:>3}  {n:>4}  {site.rank:>4}  n/{divisor:<8} {site.rank / n:.4f}"
        )
        assert site.rank >= bound
    return 0


if __name__ == "__main__":
    sys.exit(run())

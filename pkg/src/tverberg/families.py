"""Seeded point-set families for benchmarks and tests.

All coordinates are exact rationals derived deterministically from the
splitmix64/v1 stream; float-producing families (gaussian, shallow) convert
the float binary-exactly, so files and certificates round-trip losslessly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PreconditionError
from .geometry import Point, PointSet
from .rng import SplitMix64

FAMILIES = ("uniform", "gaussian", "grid", "shallow")


def generate(family: str, d: int, n: int, seed: int) -> PointSet:
    if family not in FAMILIES:
        raise PreconditionError(f"unknown family {family!r}; pick one of {FAMILIES}")
    if d < 1 or n < 1:
        raise PreconditionError("need d >= 1 and n >= 1")
    rng = SplitMix64(seed)
    if family == "uniform":
        rows = [[rng.unit_fraction() for _ in range(d)] for _ in range(n)]
    elif family == "gaussian":
        rows = [[Fraction(_gauss(rng)) for _ in range(d)] for _ in range(n)]
    elif family == "grid":
        side = math.ceil(n ** (1.0 / d))
        rows = []
        for k in range(n):
            cell = []
            rest = k
            for _ in range(d):
                cell.append(rest % side)
                rest //= side
            jitter = [Fraction(rng.below(1 << 20), 1 << 40) for _ in range(d)]
            rows.append([Fraction(c) + j for c, j in zip(cell, jitter)])
    else:  # shallow: jittered points near the unit sphere (convex position)
        rows = []
        for _ in range(n):
            g = [_gauss(rng) for _ in range(d)]
            norm = math.sqrt(sum(x * x for x in g)) or 1.0
            radius = 1.0 + rng.unit_float() / 1024.0
            rows.append([Fraction(x / norm * radius) for x in g])
    return PointSet.from_rows(rows)


def _gauss(rng: SplitMix64) -> float:
    u1 = rng.unit_float() or 5e-17
    u2 = rng.unit_float()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

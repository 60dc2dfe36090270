"""Shared test utilities: seeded instances and the certificate gate."""

from __future__ import annotations

from fractions import Fraction

from tverberg.families import generate
from tverberg.geometry import Point, PointSet
from tverberg.rng import SplitMix64
from tverberg.sites import Site
from tverberg.verify import verify_site


def rand_ps(d: int, n: int, seed: int, family: str = "uniform") -> PointSet:
    return generate(family, d, n, seed)


def rand_point(d: int, seed: int) -> Point:
    rng = SplitMix64(seed)
    return Point(tuple(rng.unit_fraction() for _ in range(d)))


def assert_valid_site(ps: PointSet, site: Site, context: str = "") -> None:
    """The global certificate gate: exact verification, zero tolerance."""
    report = verify_site(ps, site)
    assert report.valid, f"{context}: {report.violations[:4]}"


def frac(num, den=1) -> Fraction:
    return Fraction(num, den)

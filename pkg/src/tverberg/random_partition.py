"""Randomized strongly-polynomial partitions via balanced colorings.

A uniformly random balanced coloring with class size N = net size for
halfspace epsilon-nets makes every class an epsilon-net with probability
close to one, and every epsilon-net class contains every sufficiently deep
point.  Three variants are exposed, in increasing strength:

* :func:`random_coloring_partition` - the coloring alone (no point).
* :func:`random_partition_with_point` - plus a candidate deep point,
  validated exactly against every class hull, resampling on failure.
* :func:`random_partition_with_certificate` - plus a common point computed
  by exact LP with per-class convex combinations, i.e. a full Site.

Determinism: every draw flows from the named splitmix64/v1 generator, and
retries derive child seeds; identical (input, seed) reproduce identical
output on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .convex import (
    COMMON_INFEASIBLE,
    HullInside,
    common_point,
    hull_membership,
    radon_partition,
)
from .errors import InputTooSmall, PreconditionError, SearchFailure
from .geometry import Point, PointSet
from .rng import SplitMix64, derive_seed
from .sites import Batch, Log, Site, with_complement_unused

RETRY_CAP = 16


def net_size(d: int, epsilon: Fraction) -> int:
    """Epsilon-net size for halfspaces in R^d: ceil((8(d+1)/eps) ln(16(d+1)))."""
    factor = 8 * (d + 1) / float(epsilon)
    return math.ceil(factor * math.log(16 * (d + 1)))


@dataclass(frozen=True)
class ColoringParams:
    epsilon: Fraction
    net_constant: int
    colors: int
    seed: int

    @classmethod
    def for_set(cls, ps: PointSet, epsilon: Fraction, seed: int) -> "ColoringParams":
        n = net_size(ps.dim, epsilon)
        k = ps.n // n
        if k < 1:
            raise InputTooSmall(
                f"need at least {n} points for an epsilon-net class (have {ps.n})"
            )
        return cls(epsilon, n, k, seed)


def _balanced_classes(ps: PointSet, params: ColoringParams) -> list[list[int]]:
    idx = list(range(ps.n))
    SplitMix64(params.seed).shuffle(idx)
    size = params.net_constant
    return [sorted(idx[c * size : (c + 1) * size]) for c in range(params.colors)]


def random_coloring_partition(ps: PointSet, seed: int) -> list[list[int]]:
    """Balanced random coloring into floor(n/N) classes of exactly N points.

    N is the epsilon-net size at epsilon = 1/(d+1).  The n - kN leftover
    points are simply not colored.  No intersection claim is made here;
    validation is a separate call.
    """
    params = ColoringParams.for_set(ps, Fraction(1, ps.dim + 1), seed)
    return _balanced_classes(ps, params)


def _hull_contains_exact(q: Point, indices: list[int], ps: PointSet) -> bool:
    if ps.dim == 2:
        return _in_hull_2d(q, indices, ps)
    return isinstance(hull_membership(q, ps, indices), HullInside)


def _in_hull_2d(q: Point, indices: list[int], ps: PointSet) -> bool:
    """Exact planar membership via the convex hull boundary."""
    pts = sorted({ps[i].coords for i in indices})
    if len(pts) == 1:
        return q.coords == pts[0]

    def cross(o, a, b) -> Fraction:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(points):
        out: list = []
        for p in points:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    if all(cross(pts[0], pts[-1], p) == 0 for p in pts):
        # Degenerate hull: a segment. q must be on it, between the extremes.
        a, b = pts[0], pts[-1]
        if cross(a, b, q.coords) != 0:
            return False
        lo = min(a, b)
        hi = max(a, b)
        return lo <= q.coords <= hi
    upper = half(list(reversed(pts)))
    lower = half(pts)
    hull = lower[:-1] + upper[:-1]
    m = len(hull)
    for i in range(m):
        if cross(hull[i], hull[(i + 1) % m], q.coords) < 0:
            return False
    return True


def random_partition_with_point(ps: PointSet, seed: int):
    """A deep point plus a balanced coloring whose hulls all contain it.

    Class size is the net size at epsilon = 1/(2 d^2).  The candidate point
    is the iterated-Radon output; every class membership is checked in
    exact arithmetic, and failures resample point and coloring from a
    derived seed, up to the retry cap.
    """
    d = ps.dim
    epsilon = Fraction(1, 2 * d * d)
    failing: list[int] | None = None
    for attempt in range(RETRY_CAP):
        child = derive_seed(seed, attempt)
        params = ColoringParams.for_set(ps, epsilon, child)
        classes = _balanced_classes(ps, params)
        q = iterated_radon_centerpoint(ps, derive_seed(child, 1))
        bad = next(
            (c for c in classes if not _hull_contains_exact(q, c, ps)), None
        )
        if bad is None:
            return q, classes
        failing = bad
    raise SearchFailure(
        f"random_partition_with_point: retry cap {RETRY_CAP} exceeded; "
        f"last failing class {failing[:8]}..."
    )


def random_partition_with_certificate(ps: PointSet, seed: int) -> Site:
    """Site of rank floor(n/N): coloring plus an exact LP common point.

    Each class contributes one batch: the support (at most d+1 indices) of
    the sparsified convex combination expressing the common point.
    """
    for attempt in range(RETRY_CAP):
        child = derive_seed(seed, attempt)
        params = ColoringParams.for_set(ps, Fraction(1, ps.dim + 1), child)
        classes = _balanced_classes(ps, params)
        res = common_point(classes, ps)
        if res is COMMON_INFEASIBLE:
            continue
        batches = tuple(
            Batch(comb.support, comb) for comb in res.combinations
        )
        site = with_complement_unused(Site(res.point, Log(batches)), ps.n)
        if not site.is_valid(ps):  # pragma: no cover - internal sanity
            raise SearchFailure("internal: certificate failed verification")
        return site
    raise SearchFailure(f"random_partition_with_certificate: retry cap {RETRY_CAP} exceeded")


def _default_rounds(d: int, n: int) -> int:
    base = d + 2
    rounds = 1
    while base**rounds < n and rounds < 8:
        rounds += 1
    rounds = max(rounds, 3)
    while base**rounds > 4096 and rounds > 1:
        rounds -= 1
    return rounds


def iterated_radon_centerpoint(ps: PointSet, seed: int, rounds: int | None = None) -> Point:
    """Layered Radon-point tournament over uniform samples (exact).

    Level 0 holds (d+2)^rounds uniform draws (with replacement) from P;
    each level replaces d+2 consecutive points by their Radon point.  The
    output is deterministic given the seed.  No depth guarantee is made
    here; consumers validate and resample.
    """
    d = ps.dim
    if ps.n < d + 2:
        raise PreconditionError("iterated Radon needs at least d+2 points")
    if rounds is None:
        rounds = _default_rounds(d, ps.n)
    if rounds < 1:
        raise PreconditionError("rounds must be positive")
    rng = SplitMix64(seed)
    layer = [ps[rng.below(ps.n)] for _ in range((d + 2) ** rounds)]
    while len(layer) > 1:
        layer = [
            radon_partition(layer[i : i + d + 2]).radon_point
            for i in range(0, len(layer), d + 2)
        ]
    return layer[0]

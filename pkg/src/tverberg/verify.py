"""Exact certificate verification and brute-force depth oracles.

The oracles are deliberately dumb and hard-capped: they enumerate
candidate halfspaces (Tukey) or candidate batch partitions (Tverberg
depth) and count exactly, so they can be trusted as the independent side
of every cross-check in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ScaleCapExceeded
from .geometry import Point, PointSet, Simplex, point_in_simplex, BarycentricInside
from .sites import Site

ZERO = Fraction(0)


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    rank: int
    violations: tuple[str, ...]


def verify_site(ps: PointSet, site: Site) -> VerifyReport:
    """Re-check a site certificate in exact arithmetic.

    Violations are data, not errors: batches must be pairwise disjoint
    subsets of 0..n-1 of size <= d+1, and every witness must be a true
    convex combination reconstructing the site point.
    """
    violations = tuple(site.violations(ps))
    return VerifyReport(valid=not violations, rank=site.rank, violations=violations)


def _vec(p: Point, q: Point) -> tuple[Fraction, ...]:
    return tuple(a - b for a, b in zip(p.coords, q.coords))


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def _closed_count_2d(vectors, u) -> int:
    return sum(1 for v in vectors if _dot(v, u) >= 0)


def _sorted_directions(dirs):
    """Distinct directions sorted counterclockwise, exactly."""
    import functools

    def cmp(u, v):
        hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
        hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
        if hu != hv:
            return -1 if hu < hv else 1
        cross = u[0] * v[1] - u[1] * v[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    uniq: list = []
    for u in sorted(dirs, key=functools.cmp_to_key(cmp)):
        if uniq:
            last = uniq[-1]
            if last[0] * u[1] - last[1] * u[0] == 0 and _dot(last, u) > 0:
                continue
        uniq.append(u)
    return uniq


def brute_tukey_depth(ps: PointSet, q: Point) -> int:
    """Minimum number of points in a closed halfspace containing q, exact.

    Enumerates halfspace boundaries through q and d-1 points plus symbolic
    perturbation directions.  Supports d in {2,3}, n <= 64.
    """
    d = ps.dim
    if d not in (2, 3):
        raise ScaleCapExceeded("brute oracle supports d in {2,3}")
    if ps.n > 64:
        raise ScaleCapExceeded("brute oracle capped at n <= 64")
    vectors = [_vec(p, q) for p in ps]
    zeros = sum(1 for v in vectors if all(c == 0 for c in v))
    nonzero = [v for v in vectors if any(c != 0 for c in v)]
    if not nonzero:
        return zeros
    if d == 2:
        return zeros + _brute_tukey_2d(nonzero)
    return zeros + _brute_tukey_3d(nonzero)


def _brute_tukey_2d(vectors) -> int:
    candidates = []
    for (a, b) in vectors:
        candidates.append((a, b))
        candidates.append((-a, -b))
        candidates.append((-b, a))
        candidates.append((b, -a))
    dirs = _sorted_directions(candidates)
    probe = list(dirs)
    for u, v in zip(dirs, dirs[1:] + dirs[:1]):
        mid = (u[0] + v[0], u[1] + v[1])
        if mid != (ZERO, ZERO):
            probe.append(mid)
    best = None
    for u in probe:
        c = _closed_count_2d(vectors, u)
        if best is None or c < best:
            best = c
    return best


def _cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _brute_tukey_3d(vectors) -> int:
    n = len(vectors)
    # All directions parallel: one line through q.
    base = vectors[0]
    if all(all(c == 0 for c in _cross3(base, v)) for v in vectors):
        pos = sum(1 for v in vectors if _dot(v, base) > 0)
        neg = sum(1 for v in vectors if _dot(v, base) < 0)
        return min(pos, neg)
    best = None
    for i, j in itertools.combinations(range(n), 2):
        axis = _cross3(vectors[i], vectors[j])
        if all(c == 0 for c in axis):
            continue
        for u in (axis, tuple(-c for c in axis)):
            strict = 0
            boundary = []
            for v in vectors:
                s = _dot(v, u)
                if s > 0:
                    strict += 1
                elif s == 0:
                    boundary.append(v)
            # 2D subproblem on the boundary plane: perturb u by delta*w +
            # delta^2*z and count boundary vectors that stay weakly inside.
            e1 = vectors[i]
            e2 = _cross3(u, e1)
            proj = [(_dot(v, e1), _dot(v, e2)) for v in boundary]
            tilts = []
            for (a, b) in proj:
                tilts.extend([(a, b), (-a, -b), (-b, a), (b, -a)])
            tilts2 = _sorted_directions([t for t in tilts if t != (ZERO, ZERO)])
            probes = list(tilts2)
            for w1, w2 in zip(tilts2, tilts2[1:] + tilts2[:1]):
                mid = (w1[0] + w2[0], w1[1] + w2[1])
                if mid != (ZERO, ZERO):
                    probes.append(mid)
            if not probes:
                probes = [(Fraction(1), ZERO)]
            for w in probes:
                for zsign in (1, -1):
                    kept = 0
                    for (a, b) in proj:
                        s1 = a * w[0] + b * w[1]
                        if s1 > 0:
                            kept += 1
                        elif s1 == 0:
                            s2 = zsign * (a * w[1] - b * w[0])
                            if s2 > 0:
                                kept += 1
                    total = strict + kept
                    if best is None or total < best:
                        best = total
    return best


def brute_tverberg_depth(ps: PointSet, q: Point) -> int:
    """Maximum rank over all logs for q, by exhaustive batch packing.

    Capped at n <= 12, d <= 2 (bitmask dynamic program over subsets).
    """
    if ps.n > 12 or ps.dim > 2:
        raise ScaleCapExceeded("brute Tverberg depth capped at n <= 12, d <= 2")
    n, d = ps.n, ps.dim
    valid_batches: list[int] = []
    for size in range(1, d + 2):
        for combo in itertools.combinations(range(n), size):
            verdict = point_in_simplex(q, Simplex(tuple(combo)), ps)
            if isinstance(verdict, BarycentricInside):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                valid_batches.append(mask)

    @lru_cache(maxsize=None)
    def solve(mask: int) -> int:
        if mask == 0:
            return 0
        low = mask & -mask
        best = solve(mask ^ low)  # leave the lowest point unused
        for bm in valid_batches:
            if bm & low and bm & mask == bm:
                cand = 1 + solve(mask ^ bm)
                if cand > best:
                    best = cand
        return best

    return solve((1 << n) - 1)

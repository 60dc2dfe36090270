"""Dimension-reduction solver: peel two coordinates at a time, solve in the
plane, lift back.

Even dimension d: solve recursively on the first d-2 coordinates; each
returned batch hull meets the fiber over the recursive point, and the
batch witness itself names the intersection point (apply its weights to
the full-dimensional points).  Those representatives live in a plane, so a
planar partition of them groups the lower batches in triples; composing
weights gives exact certificates, sparsified to d+1 points.  Rank becomes
floor(n / 3^(d/2)).

Odd dimension d: drop one coordinate, solve in even dimension d-1, lift -
the point lifts to a line, each batch hull meets the line at a height
named by its witness.  Take the lower median height as the output point
and pair batches hitting strictly above with batches hitting strictly
below (batches hitting the median exactly join as they are).  Rank becomes
floor(n / (2 * 3^((d-1)/2))).
"""

from __future__ import annotations

from fractions import Fraction

from .convex import ConvexCombination, sparsify
from .errors import InputTooSmall, PreconditionError
from .geometry import Point, PointSet
from .planar import birch_partition
from .sites import Batch, Log, Site, with_complement_unused

ZERO = Fraction(0)


def rank_bound(d: int, n: int) -> int:
    """Guaranteed output rank of project_tverberg for n points in R^d."""
    if d < 2:
        raise PreconditionError("projection needs d >= 2")
    if d % 2 == 0:
        return n // (3 ** (d // 2))
    return n // (2 * 3 ** ((d - 1) // 2))


def _project_set(ps: PointSet, keep: int) -> PointSet:
    return PointSet(Point(p.coords[:keep]) for p in ps)


def _apply_weights(weights: dict[int, Fraction], ps: PointSet) -> Point:
    acc = [ZERO] * ps.dim
    for i, w in weights.items():
        p = ps[i]
        for c in range(ps.dim):
            acc[c] += w * p[c]
    return Point(tuple(acc))


def project_tverberg(ps: PointSet) -> Site:
    """Site of rank >= rank_bound(d, n) with exact certificates."""
    d = ps.dim
    if d < 2:
        raise PreconditionError("projection needs d >= 2")
    if rank_bound(d, ps.n) < 1:
        raise InputTooSmall("too few points for a rank-1 projected partition")
    site = _solve(ps)
    site = with_complement_unused(site, ps.n)
    if not site.is_valid(ps):  # pragma: no cover - internal sanity
        raise PreconditionError("internal: projection produced an invalid site")
    expected = rank_bound(d, ps.n)
    if site.rank < expected:  # pragma: no cover - internal sanity
        raise PreconditionError(
            f"internal: projection rank {site.rank} below bound {expected}"
        )
    return site


def _solve(ps: PointSet) -> Site:
    d = ps.dim
    if d == 2:
        return birch_partition(ps)
    if d % 2 == 0:
        return _solve_even(ps)
    return _solve_odd(ps)


def _solve_even(ps: PointSet) -> Site:
    d = ps.dim
    low = _solve(_project_set(ps, d - 2))
    reps_full = [
        _apply_weights(b.witness.weights, ps) for b in low.log.batches
    ]
    rep_plane = PointSet(Point(p.coords[d - 2 :]) for p in reps_full)
    planar_site = birch_partition(rep_plane)
    q = Point(low.point.coords + planar_site.point.coords)
    batches = []
    for tri in planar_site.log.batches:
        combined: dict[int, Fraction] = {}
        for rep_idx in tri.indices:
            mu = tri.witness.weights.get(rep_idx, ZERO)
            if mu == 0:
                continue
            for i, w in low.log.batches[rep_idx].witness.weights.items():
                if w != 0:
                    combined[i] = combined.get(i, ZERO) + mu * w
        comb = sparsify(ConvexCombination(combined, q), ps)
        batches.append(Batch(comb.support, comb))
    return Site(q, Log(tuple(batches)))


def _solve_odd(ps: PointSet) -> Site:
    d = ps.dim
    low = _solve(_project_set(ps, d - 1))
    heights = []
    for j, b in enumerate(low.log.batches):
        t = sum(
            (w * ps[i][d - 1] for i, w in b.witness.weights.items() if w != 0), ZERO
        )
        heights.append((t, j))
    heights.sort()
    t_med = heights[(len(heights) - 1) // 2][0]
    q = Point(low.point.coords + (t_med,))
    above = [(t, j) for t, j in heights if t > t_med]
    below = [(t, j) for t, j in heights if t < t_med]
    at = [j for t, j in heights if t == t_med]
    batches = []
    for j in at:
        w = low.log.batches[j].witness.weights
        comb = ConvexCombination(dict(w), q)
        batches.append(Batch(comb.support, comb))
    for (ta, ja), (tb, jb) in zip(above, below):
        alpha = (t_med - tb) / (ta - tb)
        combined: dict[int, Fraction] = {}
        for i, w in low.log.batches[ja].witness.weights.items():
            if w != 0:
                combined[i] = combined.get(i, ZERO) + alpha * w
        for i, w in low.log.batches[jb].witness.weights.items():
            if w != 0:
                combined[i] = combined.get(i, ZERO) + (1 - alpha) * w
        comb = sparsify(ConvexCombination(combined, q), ps)
        batches.append(Batch(comb.support, comb))
    return Site(q, Log(tuple(batches)))

"""Planar toolbox: Tukey depth, depth-realizing logs, centerpoints, Birch.

Depth computation works in the dual: a direction through the query point q
becomes a position t on a line, and each input point contributes a closed
ray of positions for which it lies (weakly) on the counted side.  The
minimum over closed halfplanes containing q is then the minimum number of
rays covering a position, solved per sweep direction with a doubling
4-approximation followed by an exact sweep over the O(k) surviving rays.

All comparisons are exact over Fractions.  Large arrays are pre-sorted by
float value first purely as a speed hint; the exact comparator has the
final word (near-sorted input keeps the exact sort near-linear).
"""

from __future__ import annotations

import functools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .convex import ConvexCombination
from .errors import (
    GeneralPositionViolation,
    InputTooSmall,
    PreconditionError,
    SearchFailure,
)
from .geometry import BarycentricInside, Point, PointSet, Simplex, point_in_simplex
from .rng import SplitMix64, derive_seed
from .sites import Batch, Log, Site, with_complement_unused

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Halfplane:
    """Closed halfplane {x : <normal, x> <= offset}, normal nonzero."""

    normal: tuple[Fraction, Fraction]
    offset: Fraction
    closed = True

    def contains(self, p: Point) -> bool:
        return self.normal[0] * p[0] + self.normal[1] * p[1] <= self.offset

    def on_boundary(self, p: Point) -> bool:
        return self.normal[0] * p[0] + self.normal[1] * p[1] == self.offset


@dataclass(frozen=True)
class PlanarDepthResult:
    depth: int
    witness: Halfplane


def _presorted(vals: list[Fraction]) -> list[Fraction]:
    if len(vals) > 2048:
        vals = sorted(vals, key=float)
    vals.sort()
    return vals


def _cover_bounds(rights: list[Fraction], lefts: list[Fraction], n: int):
    """Doubling scan: largest removal level that stays avoidable.

    Removing the m smallest right heads and m largest left heads leaves an
    avoidable system iff max(remaining lefts) < min(remaining rights).
    Returns (j_star, lower, upper) with provable bounds on the minimum
    cover count: lower <= k <= upper.
    """

    def feasible(m: int) -> bool:
        rem_r = rights[m:] if m < len(rights) else []
        rem_l = lefts[: max(len(lefts) - m, 0)]
        if not rem_r or not rem_l:
            return True
        return rem_l[-1] < rem_r[0]

    j = 0
    while True:
        m = n >> j
        if not feasible(m):
            j_star = j - 1  # j=0 removes everything and is always feasible
            break
        if m == 0:
            return j, 0, 0
        j += 1
    m_star = n >> j_star
    upper = min(m_star, len(rights)) + min(m_star, len(lefts))
    m_next = n >> (j_star + 1)
    lower = min(min(m_next, len(rights)), min(m_next, len(lefts))) + 1
    return j_star, lower, upper


def _cover_exact(rights: list[Fraction], lefts: list[Fraction], n: int, j_star: int):
    """Exact minimum cover count and a witness position, via survivor sweep."""
    if not rights and not lefts:
        return 0, ZERO
    level = max(j_star - 2, 0)
    m = n >> level
    surv_r = rights[: min(m, len(rights))]
    surv_l = lefts[max(len(lefts) - m, 0) :]
    lo = lefts[len(lefts) - m - 1] if len(lefts) > m else None
    hi = rights[m] if len(rights) > m else None
    anchors = sorted(set(surv_r + surv_l))
    anchors = [
        v
        for v in anchors
        if (lo is None or v > lo) and (hi is None or v < hi)
    ]
    if lo is not None:
        anchors = [lo] + anchors
    if hi is not None:
        anchors = anchors + [hi]
    candidates: list[Fraction] = []
    for a, b in zip(anchors, anchors[1:]):
        if a != b:
            candidates.append((a + b) / 2)
    if not anchors:
        candidates.append(ZERO)
    else:
        if lo is None:
            candidates.append(anchors[0] - 1)
        if hi is None:
            candidates.append(anchors[-1] + 1)
    best = None
    best_t = None
    for t in candidates:
        c = bisect_right(surv_r, t) + (len(surv_l) - bisect_left(surv_l, t))
        if best is None or c < best:
            best, best_t = c, t
    return best, best_t


def _depth_core(ps: PointSet, q: Point):
    """Exact Tukey depth of q with realizing halfplane; tolerant of ties.

    Returns (depth, halfplane).  Works even when q coincides with input
    points or lies on lines through point pairs (needed by the centerpoint
    search); the strict general-position checks live in the public wrapper.
    """
    qx, qy = q[0], q[1]
    heads_pos: list[Fraction] = []  # dx > 0
    heads_neg: list[Fraction] = []  # dx < 0
    const_down = 0
    const_up = 0
    vert_le = 0
    vert_ge = 0
    for p in ps:
        dx = p[0] - qx
        dy = p[1] - qy
        if dx <= 0:
            vert_le += 1
        if dx >= 0:
            vert_ge += 1
        if dx == 0:
            if dy <= 0:
                const_down += 1
            if dy >= 0:
                const_up += 1
        elif dx > 0:
            heads_pos.append(dy / dx)
        else:
            heads_neg.append(dy / dx)
    heads_pos = _presorted(heads_pos)
    heads_neg = _presorted(heads_neg)
    n = ps.n
    # Down family: p weakly below the line of slope t through q.
    jd, lo_d, up_d = _cover_bounds(heads_pos, heads_neg, n)
    # Up family: same heads, ray directions swapped.
    ju, lo_u, up_u = _cover_bounds(heads_neg, heads_pos, n)
    lower_down = const_down + lo_d
    lower_up = const_up + lo_u
    upper_down = const_down + up_d
    upper_up = const_up + up_u
    best_vert = min(vert_le, vert_ge)
    candidates: list[tuple[int, str, Fraction | None]] = []
    if lower_down <= min(upper_up, best_vert):
        k, t = _cover_exact(heads_pos, heads_neg, n, jd)
        candidates.append((const_down + k, "down", t))
    if lower_up <= min(upper_down, best_vert):
        k, t = _cover_exact(heads_neg, heads_pos, n, ju)
        candidates.append((const_up + k, "up", t))
    candidates.append((vert_le, "vle", None))
    candidates.append((vert_ge, "vge", None))
    depth, kind, t = min(candidates, key=lambda c: c[0])
    if kind == "down":
        witness = Halfplane((-t, ONE), qy - t * qx)
    elif kind == "up":
        witness = Halfplane((t, -ONE), t * qx - qy)
    elif kind == "vle":
        witness = Halfplane((ONE, ZERO), qx)
    else:
        witness = Halfplane((-ONE, ZERO), -qx)
    return depth, witness


def _check_query_position(ps: PointSet, q: Point) -> None:
    """Reject q in P and same-direction point pairs through q, exactly.

    Two input points on a common ray from q (equal angles) break the
    angular constructions downstream and are rejected; a pair straddling q
    on one line is ordered fine and handled exactly by the counting.
    """
    qx, qy = q[0], q[1]
    heads_pos: list[Fraction] = []
    heads_neg: list[Fraction] = []
    vert_up = 0
    vert_down = 0
    for p in ps:
        dx = p[0] - qx
        dy = p[1] - qy
        if dx == 0 and dy == 0:
            raise GeneralPositionViolation("query point coincides with an input point")
        if dx == 0:
            if dy > 0:
                vert_up += 1
            else:
                vert_down += 1
        elif dx > 0:
            heads_pos.append(dy / dx)
        else:
            heads_neg.append(dy / dx)
    if vert_up >= 2 or vert_down >= 2:
        raise GeneralPositionViolation("two points share a direction from the query")
    for side in (heads_pos, heads_neg):
        side = _presorted(side)
        for a, b in zip(side, side[1:]):
            if a == b:
                raise GeneralPositionViolation(
                    "two points share a direction from the query"
                )


def tukey_depth_2d(ps: PointSet, q: Point) -> PlanarDepthResult:
    """Exact planar Tukey depth with a realizing closed halfplane.

    Requires P plus q in general position around q: no input point equal
    to q, no two input points collinear with q.
    """
    if ps.dim != 2 or q.dim != 2:
        raise PreconditionError("tukey_depth_2d is planar only")
    _check_query_position(ps, q)
    depth, witness = _depth_core(ps, q)
    if not witness.on_boundary(q):  # pragma: no cover - internal sanity
        raise SearchFailure("internal: witness does not pass through query")
    count = sum(1 for p in ps if witness.contains(p))
    if count != depth:  # pragma: no cover - internal sanity
        raise SearchFailure("internal: witness count mismatch")
    return PlanarDepthResult(depth, witness)


# --- angular order ---------------------------------------------------------


def _ccw_indices(ps: PointSet, q: Point, indices: list[int]) -> list[int]:
    """Indices sorted counterclockwise by direction from q, exactly.

    Raises GeneralPositionViolation when two points share a direction
    (equal angles) or coincide with q.
    """
    vecs: dict[int, tuple[Fraction, Fraction]] = {}
    for i in indices:
        dx = ps[i][0] - q[0]
        dy = ps[i][1] - q[1]
        if dx == 0 and dy == 0:
            raise GeneralPositionViolation("query coincides with an input point")
        vecs[i] = (dx, dy)

    def half(v) -> int:
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(i: int, j: int) -> int:
        u, v = vecs[i], vecs[j]
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        cross = u[0] * v[1] - u[1] * v[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    if len(indices) > 2048:
        pre = sorted(
            indices,
            key=lambda i: (half(vecs[i]), math.atan2(float(vecs[i][1]), float(vecs[i][0]))),
        )
    else:
        pre = list(indices)
    order = sorted(pre, key=functools.cmp_to_key(cmp))
    for a, b in zip(order, order[1:]):
        if cmp(a, b) == 0:
            raise GeneralPositionViolation("two points share a direction from q")
    return order


def _batch_for(q: Point, tri: tuple[int, ...], ps: PointSet) -> Batch:
    verdict = point_in_simplex(q, Simplex(tri), ps)
    if not isinstance(verdict, BarycentricInside):
        raise GeneralPositionViolation(
            "internal: constructed batch does not contain the query point"
        )
    weights = {i: w for i, w in zip(tri, verdict.coords) if w > 0}
    return Batch(tri, ConvexCombination(weights, q))


# --- logs ------------------------------------------------------------------


def _deep_log(ps: PointSet, q: Point, order: list[int] | None = None) -> Log:
    """Rank floor(n/3) log for a query of depth >= ceil(n/3).

    Sorts P counterclockwise around q and takes every s-th point, with the
    1-2 leftover skips (n not divisible by 3) spread across distinct arcs
    so each arc between consecutive batch vertices stays light enough.
    """
    n = ps.n
    s = n // 3
    if s == 0:
        raise InputTooSmall("deep log needs n >= 3")
    if order is None:
        order = _ccw_indices(ps, q, list(range(n)))
    extra = n - 3 * s
    e0 = 1 if extra >= 1 else 0
    e1 = 1 if extra >= 2 else 0
    o2 = s + e0
    o3 = 2 * s + e0 + e1
    batches = []
    for i in range(s):
        tri = (order[i], order[o2 + i], order[o3 + i])
        batches.append(_batch_for(q, tri, ps))
    return Log(tuple(batches))


def deep_log_2d(ps: PointSet, q: Point) -> Log:
    """Log of rank floor(n/3) for a deep query point.

    Precondition: Tukey depth of q is at least ceil(n/3) (checked).  For n
    divisible by 3 this is the tight threshold the construction needs; for
    other n it matches depth > n/3.
    """
    need = (ps.n + 2) // 3
    result = tukey_depth_2d(ps, q)
    if result.depth < need:
        raise PreconditionError(
            f"deep log needs depth >= {need}, query has {result.depth}"
        )
    return _deep_log(ps, q)


def shallow_log_2d(ps: PointSet, q: Point, depth_result: PlanarDepthResult) -> Log:
    """Log of rank k for a query of Tukey depth k <= n/3.

    Works in the frame of the realizing halfplane: the k points inside it,
    sorted counterclockwise from its boundary direction, are matched with
    the first and last k points of the complement in counterclockwise
    order; each resulting triangle contains q.
    """
    n = ps.n
    k = depth_result.depth
    if 3 * k > n:
        raise PreconditionError("shallow log needs depth <= n/3")
    if k == 0:
        return Log(())
    nx, ny = depth_result.witness.normal
    off = depth_result.witness.offset
    # Frame: a along the boundary line, b inward (into the halfplane).
    plus: list[int] = []
    minus: list[int] = []
    coords: dict[int, tuple[Fraction, Fraction]] = {}
    for i, p in enumerate(ps):
        val = nx * p[0] + ny * p[1]
        a = -ny * (p[0] - q[0]) + nx * (p[1] - q[1])
        b = off - val
        coords[i] = (a, b)
        (plus if val <= off else minus).append(i)
    if len(plus) != k:
        raise PreconditionError("witness halfplane does not realize the depth")

    def upper_class(i: int) -> int:
        a, b = coords[i]
        if b == 0 and a > 0:
            return 0  # boundary direction, angle 0
        if b > 0:
            return 1
        return 2  # boundary direction, angle pi

    def cmp_plus(i: int, j: int) -> int:
        cu, cv = upper_class(i), upper_class(j)
        if cu != cv:
            return -1 if cu < cv else 1
        u, v = coords[i], coords[j]
        cross = u[0] * v[1] - u[1] * v[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        raise GeneralPositionViolation("two points share a direction from q")

    def cmp_minus(i: int, j: int) -> int:
        u, v = coords[i], coords[j]
        cross = u[0] * v[1] - u[1] * v[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        raise GeneralPositionViolation("two points share a direction from q")

    plus_sorted = sorted(plus, key=functools.cmp_to_key(cmp_plus))
    minus_sorted = sorted(minus, key=functools.cmp_to_key(cmp_minus))
    t_block = minus_sorted[:k] + minus_sorted[-k:]
    batches = []
    for i in range(k):
        tri = (plus_sorted[i], t_block[i], t_block[k + i])
        batches.append(_batch_for(q, tri, ps))
    return Log(tuple(batches))


def tverberg_log_2d(ps: PointSet, q: Point) -> tuple[int, Log]:
    """Tukey depth k plus a log of rank min(floor(n/3), k)."""
    result = tukey_depth_2d(ps, q)
    if 3 * result.depth <= ps.n:
        return result.depth, shallow_log_2d(ps, q, result)
    return result.depth, _deep_log(ps, q)


# --- centerpoints ----------------------------------------------------------


def _snap(value: Fraction, denom: int) -> Fraction:
    return Fraction(round(value * denom), denom)


def _centerpoint_candidates(ps: PointSet):
    """Deterministic stream of centerpoint candidates, cheapest first.

    Iterated-Radon warm starts (snapped to short rationals, then exact),
    then centroid and coordinate median, then the exhaustive exact search
    over intersections of lines through point pairs (n <= 64 only).
    """
    from .random_partition import iterated_radon_centerpoint

    n = ps.n
    seen: set[tuple[Fraction, ...]] = set()

    def fresh(p: Point):
        if p.coords in seen:
            return None
        seen.add(p.coords)
        return p

    for attempt in range(6):
        seed = derive_seed(0xC3A7E2, attempt)
        try:
            center = iterated_radon_centerpoint(ps, seed)
        except PreconditionError:
            break
        for denom_bits in (16, 28, 44):
            cand = fresh(Point(tuple(_snap(c, 1 << denom_bits) for c in center)))
            if cand is not None:
                yield cand
        cand = fresh(center)
        if cand is not None:
            yield cand
    csum = [ZERO, ZERO]
    xs: list[Fraction] = []
    ys: list[Fraction] = []
    for p in ps:
        csum[0] += p[0]
        csum[1] += p[1]
        xs.append(p[0])
        ys.append(p[1])
    cand = fresh(Point((csum[0] / n, csum[1] / n)))
    if cand is not None:
        yield cand
    xs.sort()
    ys.sort()
    cand = fresh(Point((xs[(n - 1) // 2], ys[(n - 1) // 2])))
    if cand is not None:
        yield cand
    if n <= 64:
        lines = []
        for i in range(n):
            for j in range(i + 1, n):
                # Line through p_i, p_j as a*x + b*y = c.
                a = ps[j][1] - ps[i][1]
                b = ps[i][0] - ps[j][0]
                c = a * ps[i][0] + b * ps[i][1]
                lines.append((a, b, c))
        order = list(range(len(lines)))
        SplitMix64(0x5EED).shuffle(order)
        for ii in range(len(order)):
            for jj in range(ii + 1, len(order)):
                (a1, b1, c1) = lines[order[ii]]
                (a2, b2, c2) = lines[order[jj]]
                den = a1 * b2 - a2 * b1
                if den == 0:
                    continue
                x = (c1 * b2 - c2 * b1) / den
                y = (a1 * c2 - a2 * c1) / den
                cand = fresh(Point((x, y)))
                if cand is not None:
                    yield cand


def _centerpoint_with_depth(ps: PointSet) -> tuple[Point, int]:
    n = ps.n
    if n <= 2:
        # Any closed halfplane containing P[0] contains P[0] itself.
        return ps[0], 1
    need = (n + 2) // 3
    for cand in _centerpoint_candidates(ps):
        depth, _ = _depth_core(ps, cand)
        if depth >= need:
            return cand, depth
    raise SearchFailure("centerpoint search exhausted its candidates")


def centerpoint_2d(ps: PointSet) -> Point:
    """A point of exact Tukey depth >= ceil(n/3), verified before return."""
    if ps.dim != 2:
        raise PreconditionError("centerpoint_2d is planar only")
    return _centerpoint_with_depth(ps)[0]


def birch_partition(ps: PointSet) -> Site:
    """Partition into floor(n/3) vertex-disjoint triangles with a common point.

    The site point is a centerpoint; the log is the deep log around it.
    For n not divisible by 3 the 1-2 leftover points are reported unused.
    Candidate centerpoints that violate the angular general-position needs
    of the construction are skipped in favor of the next candidate.
    """
    if ps.dim != 2:
        raise PreconditionError("birch_partition is planar only")
    n = ps.n
    if n < 3:
        raise InputTooSmall("birch_partition needs n >= 3")
    need = (n + 2) // 3
    last_err: Exception | None = None
    for cand in _centerpoint_candidates(ps):
        depth, _ = _depth_core(ps, cand)
        if depth < need:
            continue
        try:
            log = _deep_log(ps, cand)
        except GeneralPositionViolation as err:
            last_err = err
            continue
        site = with_complement_unused(Site(cand, log), n)
        if not site.is_valid(ps):  # pragma: no cover - internal sanity
            raise SearchFailure("internal: birch produced an invalid site")
        return site
    raise SearchFailure(f"birch_partition found no usable centerpoint: {last_err}")

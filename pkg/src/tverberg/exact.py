"""Exact Tverberg partitions at desk scale via min-ball local search.

The search phase runs in floats: starting from an arbitrary balanced
partition into classes of size d+1, each iteration computes (to tolerance)
the smallest ball intersecting every class hull, then swaps a "free"
vertex of one tight class with the free vertex of a tight class whose
contact point lies on the far side of the center; the ball shrinks
strictly.  Once the radius falls under tolerance, the partition is handed
to the exact LP, which either certifies a true common point in rational
arithmetic (the emitted certificate never depends on floats) or sends the
search back with a halved tolerance.

Scale caps (d <= 3, n <= 24, n divisible by d+1) keep the local search a
desk-scale tool; larger inputs belong to the approximation algorithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .convex import COMMON_INFEASIBLE, common_point
from .errors import (
    GeneralPositionViolation,
    PreconditionError,
    ScaleCapExceeded,
    SearchFailure,
)
from .geometry import PointSet, Simplex
from .sites import Batch, Log, Site

Vec = tuple[float, ...]


def _solve_float(a: list[list[float]], b: list[float]):
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) < 1e-13:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1.0 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0.0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _project_affine(x: Vec, verts: list[Vec]):
    """Projection of x onto the affine span of verts, with barycentrics."""
    base = verts[0]
    k = len(verts) - 1
    if k == 0:
        return base, [1.0]
    diffs = [[v[c] - base[c] for c in range(len(x))] for v in verts[1:]]
    gram = [[sum(a * b for a, b in zip(diffs[i], diffs[j])) for j in range(k)] for i in range(k)]
    rhs = [sum(diffs[i][c] * (x[c] - base[c]) for c in range(len(x))) for i in range(k)]
    sol = _solve_float(gram, rhs)
    if sol is None:
        return None
    proj = list(base)
    for coef, dvec in zip(sol, diffs):
        for c in range(len(proj)):
            proj[c] += coef * dvec[c]
    lam = [1.0 - sum(sol)] + sol
    return tuple(proj), lam


def _dist_hull_float(x: Vec, verts: list[Vec], tol: float = 1e-12):
    """(distance, nearest point) from x to the hull of verts, float-exactly.

    Enumerates all faces; a face's affine projection is a candidate when
    its barycentrics are (weakly) nonnegative.
    """
    best_d2 = None
    best_p = None
    for size in range(1, len(verts) + 1):
        for face in itertools.combinations(range(len(verts)), size):
            res = _project_affine(x, [verts[i] for i in face])
            if res is None:
                continue
            proj, lam = res
            if any(w < -1e-9 for w in lam):
                continue
            d2 = sum((a - b) ** 2 for a, b in zip(x, proj))
            if best_d2 is None or d2 < best_d2:
                best_d2, best_p = d2, proj
    return math.sqrt(best_d2), best_p


@dataclass(frozen=True)
class BallState:
    """Smallest-ball snapshot: center, radius, tight classes, contacts."""

    center: Vec
    radius: float
    tight_sets: tuple[int, ...]
    contact_points: tuple[Vec, ...]  # aligned with tight_sets


def _as_classes(partition, ps: PointSet) -> list[tuple[int, ...]]:
    out = []
    for cls in partition:
        if isinstance(cls, Simplex):
            out.append(tuple(cls.vertex_indices))
        else:
            out.append(tuple(cls))
    return out


def _circumcenter(pts: list[Vec]):
    """Point of the affine span of pts equidistant from all of them."""
    base = pts[0]
    k = len(pts) - 1
    if k == 0:
        return base
    diffs = [[p[c] - base[c] for c in range(len(base))] for p in pts[1:]]
    gram = [
        [2.0 * sum(a * b for a, b in zip(diffs[i], diffs[j])) for j in range(k)]
        for i in range(k)
    ]
    rhs = [sum(v * v for v in diffs[i]) for i in range(k)]
    sol = _solve_float(gram, rhs)
    if sol is None:
        return None
    c = list(base)
    for coef, dvec in zip(sol, diffs):
        for j in range(len(c)):
            c[j] += coef * dvec[j]
    return tuple(c)


def _meb_center(pts: list[Vec], d: int, hint=None):
    """Center of the minimum enclosing ball of a few float points.

    A circumball of a support subset is THE minimum enclosing ball exactly
    when it contains every point and its center lies in the convex hull of
    the subset; subsets are enumerated until one passes.  ``hint`` retries
    the support that worked last time first.
    """

    def radius2(c: Vec) -> float:
        return max(sum((a - b) ** 2 for a, b in zip(c, p)) for p in pts)

    def try_subset(sub):
        chosen = [pts[i] for i in sub]
        c = _circumcenter(chosen)
        if c is None:
            return None
        r2 = max(sum((a - b) ** 2 for a, b in zip(c, pts[i])) for i in sub)
        if radius2(c) > r2 * (1 + 1e-12) + 1e-24:
            return None
        res = _project_affine(c, chosen)
        if res is None:
            return None
        _, lam = res
        if any(w < -1e-9 for w in lam):
            return None  # center outside conv(support): not minimal
        return r2, c, sub

    if hint is not None and all(i < len(pts) for i in hint):
        got = try_subset(hint)
        if got is not None:
            return got[1], got[2]
    best = None
    for size in range(1, min(d + 1, len(pts)) + 1):
        for sub in itertools.combinations(range(len(pts)), size):
            got = try_subset(sub)
            if got is not None and (best is None or got[0] < best[0]):
                best = got
        if best is not None:
            return best[1], best[2]
    # Numerically degenerate input: fall back to the centroid.
    c = tuple(sum(p[j] for p in pts) / len(pts) for j in range(len(pts[0])))
    return c, None


def min_ball_over_hulls(partition, ps: PointSet, tol: float | None = None) -> BallState:
    """Minimize the maximum distance to the class hulls.

    Alternation: project the center onto every hull, then recenter at the
    minimum enclosing ball of the projections.  Each step is monotone
    (the new max distance never grows) and fixed points put the center in
    the convex hull of the farthest contacts, which is exactly the global
    optimality condition for this convex objective.
    """
    classes = _as_classes(partition, ps)
    d = ps.dim
    if d > 3 or ps.n > 24:
        raise ScaleCapExceeded("min-ball search capped at d <= 3, n <= 24")
    if any(len(c) > d + 1 for c in classes):
        raise PreconditionError("classes must have at most d+1 points")
    verts = [[ps[i].as_floats() for i in cls] for cls in classes]
    tol = tol if tol is not None else 1e-9 * ps.diameter_float()

    def eval_all(x: Vec):
        return [_dist_hull_float(x, v) for v in verts]

    x = tuple(
        sum(ps[i].as_floats()[c] for cls in classes for i in cls) / sum(map(len, classes))
        for c in range(d)
    )
    dists = eval_all(x)
    radius = max(dist for dist, _ in dists)
    hint = None
    stall = 0
    prev: Vec | None = None
    for it in range(6000):
        if radius <= tol / 4:
            break
        projs = [p for _, p in dists]
        center, hint = _meb_center(projs, d, hint)
        # Slow linear tails (nearly-balanced tight hulls) are cut short by
        # extrapolating along the geometric iterate direction when the step
        # ratio is stable; accepted only if it does not increase the max.
        if prev is not None and it % 4 == 3:
            d1 = tuple(a - b for a, b in zip(x, prev))
            d2 = tuple(a - b for a, b in zip(center, x))
            n1 = math.sqrt(sum(v * v for v in d1))
            n2 = math.sqrt(sum(v * v for v in d2))
            if n1 > 0 and 0 < n2 < n1:
                rho = n2 / n1
                scale = rho / (1 - rho)
                cand = tuple(c + scale * v for c, v in zip(center, d2))
                cand_dists = eval_all(cand)
                cand_radius = max(dist for dist, _ in cand_dists)
                if cand_radius <= max(
                    dist for dist, _ in eval_all(center)
                ):
                    prev, x = x, cand
                    dists, radius = cand_dists, cand_radius
                    continue
        new_dists = eval_all(center)
        new_radius = max(dist for dist, _ in new_dists)
        if new_radius > radius:
            break  # float floor reached; keep the better iterate
        improved = radius - new_radius
        prev, x = x, center
        dists, radius = new_dists, new_radius
        if improved <= max(1e-15, tol * 1e-4):
            stall += 1
            if stall >= 8:
                break
        else:
            stall = 0
    tight = tuple(i for i, (dist, _) in enumerate(dists) if dist >= radius - 2 * tol)
    contacts = tuple(dists[i][1] for i in tight)
    return BallState(x, radius, tight, contacts)


def _free_point(contact: Vec, cls: tuple[int, ...], ps: PointSet, tol: float):
    """Lowest-index vertex whose removal keeps the contact in the class hull."""
    if len(cls) == 1:
        return None
    for drop in cls:
        rest = [ps[i].as_floats() for i in cls if i != drop]
        dist, _ = _dist_hull_float(contact, rest)
        if dist <= tol:
            return drop
    return None


def exchange_step(state: BallState, partition, ps: PointSet, tol: float | None = None):
    """Swap free points between two tight classes to let the ball shrink.

    Takes the first tight class with a free point f1, the hyperplane
    through the center orthogonal to f1 - center, and a tight contact
    strictly on the far side; swaps f1 with that class's free point.
    """
    classes = _as_classes(partition, ps)
    tol = tol if tol is not None else 1e-9 * ps.diameter_float()
    free_tol = max(tol * 10, 1e-7 * ps.diameter_float())
    center = state.center
    for pos, src in enumerate(state.tight_sets):
        contact_src = state.contact_points[pos]
        f1 = _free_point(contact_src, classes[src], ps, free_tol)
        if f1 is None:
            continue
        f1c = ps[f1].as_floats()
        axis = tuple(a - b for a, b in zip(f1c, center))
        best = None
        for pos2, other in enumerate(state.tight_sets):
            if other == src:
                continue
            q2 = state.contact_points[pos2]
            side = sum(a * (b - c) for a, b, c in zip(axis, q2, center))
            if side < 0 and (best is None or side < best[0]):
                best = (side, other, q2)
        if best is None:
            continue
        _, other, q2 = best
        f2 = _free_point(q2, classes[other], ps, free_tol)
        if f2 is None:
            continue
        new_classes = list(classes)
        new_classes[src] = tuple(sorted(i for i in classes[src] if i != f1)) + (f2,)
        new_classes[other] = tuple(sorted(i for i in classes[other] if i != f2)) + (f1,)
        return [tuple(sorted(c)) for c in new_classes]
    raise GeneralPositionViolation(
        "no eligible free-point exchange at positive radius"
    )


def exact_tverberg(ps: PointSet, trace: list | None = None) -> Site:
    """Partition into n/(d+1) classes whose hulls share a certified point.

    Local search (min ball + exchange) runs in floats; the final point and
    all convex-combination witnesses come from the exact LP over the final
    classes, so the certificate is exact.  If the LP rejects a float-
    converged partition the tolerance is halved and the search resumes.
    """
    d, n = ps.dim, ps.n
    if d > 3 or n > 24:
        raise ScaleCapExceeded("exact solver capped at d <= 3, n <= 24")
    if n % (d + 1) != 0:
        raise PreconditionError("exact solver needs n divisible by d+1")
    bad = ps.general_position_violation()
    if bad is not None:
        raise GeneralPositionViolation(f"affinely dependent points {bad}")
    r = n // (d + 1)
    classes = [tuple(range(i * (d + 1), (i + 1) * (d + 1))) for i in range(r)]
    tol = 1e-9 * ps.diameter_float()
    halvings = 0
    for _ in range(600):
        state = min_ball_over_hulls(classes, ps, tol)
        if trace is not None:
            trace.append(state.radius)
        if state.radius <= tol:
            res = common_point(classes, ps)
            if res is COMMON_INFEASIBLE:
                halvings += 1
                if halvings > 8:
                    raise SearchFailure(
                        "exact solver: tolerance exhausted without an exact point"
                    )
                tol /= 2
                continue
            batches = tuple(
                Batch(cls, comb) for cls, comb in zip(classes, res.combinations)
            )
            site = Site(res.point, Log(batches), ())
            if not site.is_valid(ps):  # pragma: no cover - internal sanity
                raise SearchFailure("internal: exact solver emitted an invalid site")
            return site
        classes = exchange_step(state, classes, ps, tol)
    raise SearchFailure("exact solver: iteration cap exceeded")

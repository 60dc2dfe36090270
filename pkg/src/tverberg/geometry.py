"""Exact geometric and linear-algebra primitives.

All coordinates are ``fractions.Fraction``: arithmetic is exact and every
result is automatically reduced to lowest terms, so there is no rounding
anywhere in this module.  Float twins of the distance primitive (used only
to steer local search in the exact solver) live in ``exact.py``.

Conventions
-----------
* A :class:`Point` is an immutable tuple of rationals.
* A :class:`PointSet` fixes the index space 0..n-1 that all certificates
  refer to; indices are stable for the lifetime of the set.
* :func:`solve_linear` either solves exactly or hands back a nonzero
  null-space vector of the matrix as a rank-deficiency witness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import PreconditionError

Rational = Union[int, str, float, Fraction]


def frac(x: Rational) -> Fraction:
    """Exact conversion: ints, 'num/den' / decimal strings, floats (binary-exact)."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class Point:
    """A point in Q^d."""

    coords: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __add__(self, other: "Point") -> "Point":
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: Fraction) -> "Point":
        return Point(tuple(c * a for a in self.coords))

    def dot(self, other: "Point") -> Fraction:
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)


def pt(*coords: Rational) -> Point:
    return Point(tuple(frac(c) for c in coords))


class PointSet:
    """Indexed, immutable collection of same-dimension points."""

    def __init__(self, points: Iterable[Point]):
        self.points: tuple[Point, ...] = tuple(points)
        if not self.points:
            raise PreconditionError("empty point set")
        d = self.points[0].dim
        if any(p.dim != d for p in self.points):
            raise PreconditionError("mixed dimensions in point set")
        self.dim = d

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Rational]]) -> "PointSet":
        return cls(Point(tuple(frac(c) for c in row)) for row in rows)

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        """New set from the given indices; caller keeps the index mapping."""
        return PointSet(self.points[i] for i in indices)

    def diameter_float(self) -> float:
        """Cheap float bounding-box diagonal; a scale, not a certificate."""
        los = [min(float(p[c]) for p in self.points) for c in range(self.dim)]
        his = [max(float(p[c]) for p in self.points) for c in range(self.dim)]
        return math.sqrt(sum((h - l) ** 2 for l, h in zip(los, his))) or 1.0

    def general_position_violation(self, rng=None, samples: int = 2000):
        """Search for d+1 affinely dependent points.

        Exhaustive when the number of (d+1)-subsets is below ``samples``,
        otherwise a seeded random sample of subsets.  Returns the offending
        index tuple or None.
        """
        d, n = self.dim, self.n
        if n < d + 1:
            return None
        total = math.comb(n, d + 1)
        if total <= samples:
            subsets = itertools.combinations(range(n), d + 1)
        else:
            from .rng import SplitMix64

            gen = rng if rng is not None else SplitMix64(0)
            subsets = (tuple(sorted(gen.sample_indices(n, d + 1))) for _ in range(samples))
        for sub in subsets:
            if orientation([self.points[i] for i in sub]) == 0:
                return tuple(sub)
        return None


@dataclass(frozen=True)
class Simplex:
    """Up to d+1 distinct indices into a PointSet."""

    vertex_indices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertex_indices)) != len(self.vertex_indices):
            raise PreconditionError("simplex vertices must be distinct")

    def __len__(self) -> int:
        return len(self.vertex_indices)


@dataclass(frozen=True)
class NullSpaceWitness:
    """Nonzero vector v with A @ v = 0, reported when A is singular."""

    vector: tuple[Fraction, ...]


def solve_linear(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Union[tuple[Fraction, ...], NullSpaceWitness]:
    """Solve the square system A x = b exactly.

    Returns the unique solution when A is nonsingular; otherwise a
    :class:`NullSpaceWitness` carrying a nonzero null vector of A.
    """
    m = len(matrix)
    if any(len(row) != m for row in matrix) or len(rhs) != m:
        raise PreconditionError("solve_linear needs a square system")
    a = [[frac(x) for x in row] + [frac(rhs[i])] for i, row in enumerate(matrix)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, m) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [v * inv for v in a[row]]
        for r in range(m):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivot_cols.append(col)
        row += 1
        if row == m:
            break
    if row == m:
        x = [Fraction(0)] * m
        for r, col in enumerate(pivot_cols):
            x[col] = a[r][m]
        return tuple(x)
    free_col = next(c for c in range(m) if c not in pivot_cols)
    v = [Fraction(0)] * m
    v[free_col] = Fraction(1)
    for r, col in enumerate(pivot_cols):
        v[col] = -a[r][free_col]
    return NullSpaceWitness(tuple(v))


def affine_dependence(points: Sequence[Point]) -> tuple[Fraction, ...]:
    """Nonzero lambda with sum(lambda) = 0 and sum(lambda_i * p_i) = 0.

    Requires at least d+2 points (such a dependence always exists then).
    """
    k = len(points)
    d = points[0].dim
    if k < d + 2:
        raise PreconditionError("affine dependence needs at least d+2 points")
    # Null vector of the (d+1) x k lifted matrix. Pad with zero rows to square.
    rows: list[list[Fraction]] = [[Fraction(1)] * k]
    for c in range(d):
        rows.append([p[c] for p in points])
    while len(rows) < k:
        rows.append([Fraction(0)] * k)
    res = solve_linear(rows, [Fraction(0)] * k)
    if isinstance(res, NullSpaceWitness):
        return res.vector
    raise PreconditionError("points admit no affine dependence")  # pragma: no cover


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    sign = 1
    acc = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        acc *= pv
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / pv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return acc if sign > 0 else -acc


def orientation(points: Sequence[Point]) -> int:
    """Sign of the lifted (d+1)x(d+1) determinant of d+1 points, exact."""
    k = len(points)
    d = points[0].dim
    if k != d + 1:
        raise PreconditionError("orientation needs exactly d+1 points")
    mat = [[Fraction(1)] + list(p.coords) for p in points]
    value = det(mat)
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class BarycentricInside:
    """Exact barycentric coordinates of a point inside a simplex."""

    coords: tuple[Fraction, ...]  # aligned with the simplex vertex order


class Outside:
    """Marker verdict: point is not in the simplex hull."""

    def __repr__(self):  # pragma: no cover
        return "Outside"


OUTSIDE = Outside()


def _barycentric_exact(q: Point, verts: Sequence[Point]):
    """Unique barycentric solution for affinely independent verts, else None."""
    k = len(verts)
    d = q.dim
    rows: list[list[Fraction]] = [[Fraction(1)] * k]
    rhs: list[Fraction] = [Fraction(1)]
    for c in range(d):
        rows.append([v[c] for v in verts])
        rhs.append(q[c])
    # Least-structure exact solve: Gaussian elimination on the (d+1) x k system.
    a = [row + [rhs[i]] for i, row in enumerate(rows)]
    nrows, ncols = len(a), k
    pivot_cols: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivot_cols.append(col)
        r += 1
    # Inconsistent -> no solution; underdetermined -> vertices affinely dependent.
    for i in range(r, nrows):
        if a[i][ncols] != 0:
            return None
    if len(pivot_cols) < k:
        return "dependent"
    lam = [Fraction(0)] * k
    for i, col in enumerate(pivot_cols):
        lam[col] = a[i][ncols]
    return tuple(lam)


def point_in_simplex(q: Point, s: Simplex, ps: PointSet):
    """Exact membership of q in the convex hull of the simplex vertices.

    Returns :class:`BarycentricInside` with nonnegative coordinates summing
    to one (reconstructing q exactly), or the :data:`OUTSIDE` marker.
    Degenerate (affinely dependent) vertex sets fall back to a search over
    independent subsets, which is sound by Caratheodory.
    """
    if q.dim != ps.dim:
        raise PreconditionError("dimension mismatch")
    verts = [ps[i] for i in s.vertex_indices]
    lam = _barycentric_exact(q, verts)
    if lam is None:
        return OUTSIDE
    if lam != "dependent":
        if all(w >= 0 for w in lam):
            return BarycentricInside(tuple(lam))
        return OUTSIDE
    k = len(verts)
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            sub = [verts[i] for i in subset]
            res = _barycentric_exact(q, sub)
            if res is None or res == "dependent":
                continue
            if all(w >= 0 for w in res):
                full = [Fraction(0)] * k
                for pos, w in zip(subset, res):
                    full[pos] = w
                return BarycentricInside(tuple(full))
    return OUTSIDE


@dataclass(frozen=True)
class SimplexDistance:
    """Distance report from a query point to a simplex hull.

    ``dist2`` is the exact squared distance; ``distance`` is its float
    square root for callers that want a magnitude.  ``nearest`` is exact
    and lies in the hull; ``supporting_face`` is the (minimal) subset of
    the simplex vertex indices whose hull contains it.
    """

    dist2: Fraction
    nearest: Point
    supporting_face: tuple[int, ...]

    @property
    def distance(self) -> float:
        return math.sqrt(float(self.dist2))


def _affine_projection(q: Point, verts: Sequence[Point]):
    """Project q onto the affine span of verts; exact normal equations.

    Returns (projection point, barycentric over verts) or None when the
    verts are affinely dependent (the face is skipped; a full-rank subset
    of it appears elsewhere in the enumeration).
    """
    base = verts[0]
    k = len(verts) - 1
    if k == 0:
        return base, (Fraction(1),)
    diffs = [v - base for v in verts[1:]]
    gram = [[diffs[i].dot(diffs[j]) for j in range(k)] for i in range(k)]
    rhs = [diffs[i].dot(q - base) for i in range(k)]
    sol = solve_linear(gram, rhs)
    if isinstance(sol, NullSpaceWitness):
        return None
    proj = base
    for c, dvec in zip(sol, diffs):
        proj = proj + dvec.scale(c)
    lam = (Fraction(1) - sum(sol, Fraction(0)),) + tuple(sol)
    return proj, lam


def dist_point_simplex(q: Point, s: Simplex, ps: PointSet) -> SimplexDistance:
    """Nearest point of hull(s) to q, by recursion over all faces.

    Every nonempty face is considered; q is projected onto the face's
    affine span, and the projection is a candidate when its barycentric
    coordinates are all nonnegative.  The minimum over candidates is the
    true nearest point.  Cost is 2^(k+1) small solves, fine for k <= d <= 8.
    """
    if q.dim != ps.dim:
        raise PreconditionError("dimension mismatch")
    inside = point_in_simplex(q, s, ps)
    if isinstance(inside, BarycentricInside):
        return SimplexDistance(Fraction(0), q, tuple(s.vertex_indices))
    idx = s.vertex_indices
    verts = [ps[i] for i in idx]
    best: SimplexDistance | None = None
    for size in range(1, len(idx) + 1):
        for face in itertools.combinations(range(len(idx)), size):
            res = _affine_projection(q, [verts[i] for i in face])
            if res is None:
                continue
            proj, lam = res
            if any(w < 0 for w in lam):
                continue
            diff = q - proj
            d2 = diff.dot(diff)
            if best is None or d2 < best.dist2 or (
                d2 == best.dist2 and len(face) < len(best.supporting_face)
            ):
                best = SimplexDistance(d2, proj, tuple(idx[i] for i in face))
    assert best is not None
    return best

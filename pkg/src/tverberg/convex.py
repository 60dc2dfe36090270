"""Radon partitions, convex-combination sparsification, hull membership.

These are the primitives every partition algorithm composes.  All outputs
carry exact rational certificates:

* :func:`radon_partition` splits d+2 points into two sides whose hulls
  share a point, with one exact convex combination per side.
* :func:`sparsify` trims any convex combination to support <= d+1 by
  repeatedly cancelling along an affine dependence of d+2 support points.
* :func:`hull_membership` decides q in conv(P) by exact LP feasibility and
  returns either a sparsified combination or an exact separating
  hyperplane extracted from the Farkas certificate.
* :func:`common_point` finds one point inside the hulls of several index
  sets simultaneously, again by exact LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .geometry import Point, PointSet, affine_dependence, frac
from .lp import EQ, LinearSystem, LpFeasible, LpInfeasible, lp_feasible

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ConvexCombination:
    """Sparse map index -> nonnegative weight, summing to 1, hitting target."""

    weights: dict[int, Fraction]
    target: Point

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, w in self.weights.items() if w > 0))

    def validate(self, ps: PointSet) -> bool:
        if any(w < 0 for w in self.weights.values()):
            return False
        if sum(self.weights.values(), ZERO) != 1:
            return False
        acc = [ZERO] * ps.dim
        for i, w in self.weights.items():
            if not 0 <= i < ps.n:
                return False
            if w == 0:
                continue
            p = ps[i]
            for c in range(ps.dim):
                acc[c] += w * p[c]
        return tuple(acc) == self.target.coords


def combination_point(weights: dict[int, Fraction], ps: PointSet) -> Point:
    acc = [ZERO] * ps.dim
    for i, w in weights.items():
        if w == 0:
            continue
        p = ps[i]
        for c in range(ps.dim):
            acc[c] += w * p[c]
    return Point(tuple(acc))


@dataclass(frozen=True)
class RadonResult:
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    radon_point: Point
    comb_a: ConvexCombination
    comb_b: ConvexCombination


def radon_partition(points: Sequence[Point]) -> RadonResult:
    """Split d+2 points in R^d into two parts with intersecting hulls.

    Indices in the result refer to positions in ``points``.  Points whose
    dependence coefficient is zero land on side A (deterministic output).
    """
    d = points[0].dim
    if len(points) != d + 2:
        raise PreconditionError("radon_partition needs exactly d+2 points")
    lam = affine_dependence(points)
    if all(v <= 0 for v in lam):
        lam = tuple(-v for v in lam)
    side_a = tuple(i for i, v in enumerate(lam) if v >= 0)
    side_b = tuple(i for i, v in enumerate(lam) if v < 0)
    pos_sum = sum((v for v in lam if v > 0), ZERO)
    weights_a = {i: lam[i] / pos_sum for i in side_a if lam[i] > 0}
    weights_b = {i: -lam[i] / pos_sum for i in side_b}
    acc = [ZERO] * d
    for i, w in weights_a.items():
        for c in range(d):
            acc[c] += w * points[i][c]
    rp = Point(tuple(acc))
    return RadonResult(
        side_a,
        side_b,
        rp,
        ConvexCombination(weights_a, rp),
        ConvexCombination(weights_b, rp),
    )


def sparsify(comb: ConvexCombination, ps: PointSet) -> ConvexCombination:
    """Reduce a convex combination to support of at most d+1 points.

    Each pivot takes d+2 support points, computes their affine dependence,
    and subtracts the largest multiple that keeps all weights nonnegative,
    zeroing at least one weight; the target is preserved exactly at every
    step.
    """
    d = ps.dim
    weights = {i: w for i, w in comb.weights.items() if w > 0}
    while len(weights) > d + 1:
        support = sorted(weights)[: d + 2]
        lam = affine_dependence([ps[i] for i in support])
        if all(v <= 0 for v in lam):
            lam = tuple(-v for v in lam)
        # Largest t with weights - t*lam >= 0: binds at positive lambda.
        t = min(weights[i] / v for i, v in zip(support, lam) if v > 0)
        for i, v in zip(support, lam):
            if v != 0:
                w = weights[i] - t * v
                if w == 0:
                    del weights[i]
                else:
                    weights[i] = w
    return ConvexCombination(weights, comb.target)


@dataclass(frozen=True)
class SeparationWitness:
    """Hyperplane with <normal, p> <= offset for all p in P, <normal, q> > offset."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def validate(self, q: Point, ps: PointSet | None) -> bool:
        if all(v == 0 for v in self.normal):
            return False
        qval = sum((a * b for a, b in zip(self.normal, q.coords)), ZERO)
        if qval <= self.offset:
            return False
        if ps is not None:
            for p in ps:
                if sum((a * b for a, b in zip(self.normal, p.coords)), ZERO) > self.offset:
                    return False
        return True


@dataclass(frozen=True)
class HullInside:
    combination: ConvexCombination


@dataclass(frozen=True)
class HullOutside:
    witness: SeparationWitness


def hull_membership(q: Point, ps: PointSet | None, indices: Sequence[int] | None = None):
    """Decide q in conv(P) exactly; certify whichever verdict holds.

    ``indices`` restricts the hull to a subset of P (default: all points).
    Inside verdicts are sparsified to support <= d+1.  An empty restriction
    is Outside with an axis witness.
    """
    if ps is None or (indices is not None and len(indices) == 0):
        normal = tuple([ONE] + [ZERO] * (q.dim - 1))
        return HullOutside(SeparationWitness(normal, q[0] - 1))
    if q.dim != ps.dim:
        raise PreconditionError("dimension mismatch")
    idx = list(range(ps.n)) if indices is None else list(indices)
    d = ps.dim
    system = LinearSystem(num_vars=len(idx), nonneg=frozenset(range(len(idx))))
    system.add([ONE] * len(idx), EQ, ONE)
    for c in range(d):
        system.add([ps[i][c] for i in idx], EQ, q[c])
    res = lp_feasible(system)
    if isinstance(res, LpFeasible):
        weights = {
            idx[j]: w for j, w in enumerate(res.assignment) if w > 0
        }
        comb = sparsify(ConvexCombination(weights, q), ps)
        return HullInside(comb)
    mu = res.multipliers  # (mu_0 for the sum row, mu_1..mu_d for coordinates)
    normal = tuple(mu[1 : d + 1])
    offset = -mu[0]
    witness = SeparationWitness(normal, offset)
    if not witness.validate(q, ps.subset(idx)):
        raise PreconditionError("internal: invalid separation witness")
    return HullOutside(witness)


@dataclass(frozen=True)
class CommonPointFeasible:
    point: Point
    combinations: tuple[ConvexCombination, ...]


class CommonPointInfeasible:
    def __repr__(self):  # pragma: no cover
        return "CommonPointInfeasible"


COMMON_INFEASIBLE = CommonPointInfeasible()


def common_point(batches: Sequence[Sequence[int]], ps: PointSet):
    """A point in the intersection of the batch hulls, with certificates.

    Feasible iff the hulls intersect; the returned point comes with one
    exact convex combination per batch, each sparsified to support <= d+1.
    A single batch short-circuits to its first vertex (any hull point is a
    valid answer there).
    """
    if not batches or any(len(b) == 0 for b in batches):
        raise PreconditionError("batches must be nonempty")
    d = ps.dim
    if len(batches) == 1:
        i = batches[0][0]
        target = ps[i]
        comb = ConvexCombination({i: ONE}, target)
        return CommonPointFeasible(target, (comb,))
    # Variables: weights per batch occurrence, then q split into (+,-).
    offsets = []
    nw = 0
    for b in batches:
        offsets.append(nw)
        nw += len(b)
    nvars = nw + d
    system = LinearSystem(num_vars=nvars, nonneg=frozenset(range(nw)))
    for bi, b in enumerate(batches):
        row = [ZERO] * nvars
        for j in range(len(b)):
            row[offsets[bi] + j] = ONE
        system.add(row, EQ, ONE)
        for c in range(d):
            row = [ZERO] * nvars
            for j, i in enumerate(b):
                row[offsets[bi] + j] = ps[i][c]
            row[nw + c] = -ONE
            system.add(row, EQ, ZERO)
    res = lp_feasible(system)
    if isinstance(res, LpInfeasible):
        return COMMON_INFEASIBLE
    x = res.assignment
    q = Point(tuple(x[nw + c] for c in range(d)))
    combs = []
    for bi, b in enumerate(batches):
        weights: dict[int, Fraction] = {}
        for j, i in enumerate(b):
            w = x[offsets[bi] + j]
            if w > 0:
                weights[i] = weights.get(i, ZERO) + w
        combs.append(sparsify(ConvexCombination(weights, q), ps))
    return CommonPointFeasible(q, tuple(combs))

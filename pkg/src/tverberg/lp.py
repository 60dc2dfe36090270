"""Exact-rational linear programming: dense two-phase simplex, Bland's rule.

Everything here is feasibility-grade machinery for desk-scale instances:
a few dozen rows, up to a few thousand columns.  Bland's pivoting rule
guarantees termination (no cycling); all arithmetic is Fraction-exact, so
verdicts are certificates, not estimates.

The public entry point is :func:`lp_feasible` over a :class:`LinearSystem`
of mixed <= / >= / == rows with optionally sign-restricted variables.
Infeasibility comes back with exact Farkas multipliers, verified before
they are returned.  :func:`minimize_standard` exposes the optimizing
simplex (min c.x, Ax = b, x >= 0) for the few places that need an optimum
and a dual vector rather than a plain verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError, TverbergError

ZERO = Fraction(0)
ONE = Fraction(1)

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class LinearSystem:
    """A finite system of rational linear constraints.

    ``nonneg`` lists variables restricted to x_j >= 0; all others are free.
    """

    num_vars: int
    nonneg: frozenset[int] = field(default_factory=frozenset)
    rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = field(default_factory=list)

    def add(self, coeffs: Sequence[Fraction], rel: str, rhs: Fraction) -> None:
        if len(coeffs) != self.num_vars:
            raise PreconditionError("coefficient length mismatch")
        if rel not in (LE, GE, EQ):
            raise PreconditionError(f"unknown relation {rel!r}")
        self.rows.append((tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs)))


@dataclass(frozen=True)
class LpFeasible:
    assignment: tuple[Fraction, ...]


@dataclass(frozen=True)
class LpInfeasible:
    """Farkas certificate: multipliers mu per original row with
    mu_i <= 0 on <=-rows, mu_i >= 0 on >=-rows, free on ==-rows, such that
    sum_i mu_i a_i is componentwise <= 0 on nonnegative variables, exactly 0
    on free variables, and sum_i mu_i b_i > 0.
    """

    multipliers: tuple[Fraction, ...]


class _Unbounded(TverbergError):
    pass


class _Tableau:
    """Dense simplex tableau over Fractions with one artificial per row."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction]):
        self.m = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        # Flip rows to make rhs nonnegative, then append artificial identity.
        self.flip = [(-1 if b < 0 else 1) for b in rhs]
        self.t: list[list[Fraction]] = []
        for i, row in enumerate(rows):
            f = self.flip[i]
            r = [f * v for v in row]
            r.extend(ONE if j == i else ZERO for j in range(self.m))
            r.append(f * rhs[i])
            self.t.append(r)
        self.total = self.ncols + self.m
        self.basis = [self.ncols + i for i in range(self.m)]

    def _pivot(self, row: int, col: int) -> None:
        t = self.t
        pr = t[row]
        inv = ONE / pr[col]
        t[row] = pr = [v * inv for v in pr]
        # Row updates touch only the pivot row's nonzero columns.
        nz = [j for j, v in enumerate(pr) if v != 0]
        for i in range(self.m):
            if i != row:
                f = t[i][col]
                if f != 0:
                    ri = t[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        f = self.obj[col]
        if f != 0:
            obj = self.obj
            for j in nz:
                obj[j] -= f * pr[j]
        self.basis[row] = col

    def _run(self, allow_cols: int) -> None:
        """Pivot to optimality over columns [0, allow_cols).

        Most-negative-reduced-cost entering by default; a run of degenerate
        pivots flips the solve to Bland's least-index rule for good, which
        rules out cycling, so termination is guaranteed either way.
        """
        bland = False
        stall = 0
        stall_limit = 24 + 4 * self.m
        while True:
            obj = self.obj
            enter = -1
            if bland:
                for j in range(allow_cols):
                    if obj[j] < 0:
                        enter = j
                        break
            else:
                best = ZERO
                for j in range(allow_cols):
                    v = obj[j]
                    if v < best:
                        best, enter = v, j
            if enter < 0:
                return
            best_row, best_ratio = -1, None
            for i in range(self.m):
                a = self.t[i][enter]
                if a > 0:
                    ratio = self.t[i][-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best_row])
                    ):
                        best_row, best_ratio = i, ratio
            if best_row < 0:
                raise _Unbounded()
            self._pivot(best_row, enter)
            if not bland:
                if best_ratio == 0:
                    stall += 1
                    if stall > stall_limit:
                        bland = True
                else:
                    stall = 0

    def phase1(self) -> Fraction:
        # Cost 1 on artificials: reduced costs = -sum of rows on structurals.
        obj = [ZERO] * (self.total + 1)
        for i in range(self.m):
            row = self.t[i]
            for j in range(self.total + 1):
                obj[j] -= row[j]
        for i in range(self.m):
            obj[self.ncols + i] += ONE  # artificial own cost
        self.obj = obj
        self._run(self.ncols)  # artificials never re-enter
        return -self.obj[-1]

    def phase2(self, costs: list[Fraction]) -> Fraction:
        obj = list(costs) + [ZERO] * self.m + [ZERO]
        for i in range(self.m):
            cb = obj[self.basis[i]] if self.basis[i] < self.ncols else ZERO
            if cb != 0:
                row = self.t[i]
                for j in range(self.total + 1):
                    obj[j] -= cb * row[j]
        # Null out reduced costs on basic columns exactly (they are units).
        self.obj = obj
        self._run(self.ncols)
        return -self.obj[-1]

    def purge_artificials(self) -> None:
        """Degenerate-pivot basic artificials onto structural columns.

        After a zero phase-1 optimum every artificial basic sits at value 0;
        pivoting it out (when its row has any structural entry) keeps phase-2
        pivots from ever moving an artificial off zero.  All-zero rows are
        redundant and stay inert.
        """
        for i in range(self.m):
            if self.basis[i] >= self.ncols:
                col = next((j for j in range(self.ncols) if self.t[i][j] != 0), None)
                if col is not None:
                    self._pivot(i, col)

    def solution(self) -> list[Fraction]:
        x = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            if b < self.ncols:
                x[b] = self.t[i][-1]
        return x

    def dual_from_obj(self, art_cost: Fraction) -> list[Fraction]:
        """y_i read off the artificial columns: flip_i * (art_cost - objrow[art_i])."""
        return [
            self.flip[i] * (art_cost - self.obj[self.ncols + i]) for i in range(self.m)
        ]


def _standardize(system: LinearSystem):
    """Rewrite to A x' = b with x' >= 0; return (rows, rhs, decode, col_meta).

    Free variables split into (+, -) column pairs; <= / >= rows get slack
    columns.  ``col_meta`` records, for Farkas sign checks, which original
    variable each structural column represents (or None for slacks).
    """
    nv = system.num_vars
    col_of_var: list[tuple[int, int | None]] = []
    ncols = 0
    for j in range(nv):
        if j in system.nonneg:
            col_of_var.append((ncols, None))
            ncols += 1
        else:
            col_of_var.append((ncols, ncols + 1))
            ncols += 2
    slack_cols: list[int | None] = []
    for _, rel, _ in system.rows:
        if rel == EQ:
            slack_cols.append(None)
        else:
            slack_cols.append(ncols)
            ncols += 1
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, (coeffs, rel, b) in enumerate(system.rows):
        row = [ZERO] * ncols
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            pos, neg = col_of_var[j]
            row[pos] = c
            if neg is not None:
                row[neg] = -c
        if rel == LE:
            row[slack_cols[i]] = ONE
        elif rel == GE:
            row[slack_cols[i]] = -ONE
        rows.append(row)
        rhs.append(b)

    def decode(x: list[Fraction]) -> tuple[Fraction, ...]:
        out = []
        for j in range(nv):
            pos, neg = col_of_var[j]
            out.append(x[pos] - (x[neg] if neg is not None else ZERO))
        return tuple(out)

    return rows, rhs, decode


def _check_feasible(system: LinearSystem, x: Sequence[Fraction]) -> bool:
    for j in system.nonneg:
        if x[j] < 0:
            return False
    for coeffs, rel, b in system.rows:
        v = sum((c * xi for c, xi in zip(coeffs, x) if c != 0), ZERO)
        if rel == LE and v > b:
            return False
        if rel == GE and v < b:
            return False
        if rel == EQ and v != b:
            return False
    return True


def _check_farkas(system: LinearSystem, mu: Sequence[Fraction]) -> bool:
    for (_, rel, _), m in zip(system.rows, mu):
        if rel == LE and m > 0:
            return False
        if rel == GE and m < 0:
            return False
    combo = [ZERO] * system.num_vars
    total = ZERO
    for (coeffs, _, b), m in zip(system.rows, mu):
        if m == 0:
            continue
        total += m * b
        for j, c in enumerate(coeffs):
            if c != 0:
                combo[j] += m * c
    if total <= 0:
        return False
    for j, w in enumerate(combo):
        if j in system.nonneg:
            if w > 0:
                return False
        elif w != 0:
            return False
    return True


def lp_feasible(system: LinearSystem):
    """Exact feasibility verdict with a certificate either way."""
    if not system.rows:
        return LpFeasible(tuple(ZERO for _ in range(system.num_vars)))
    rows, rhs, decode = _standardize(system)
    tab = _Tableau(rows, rhs)
    z = tab.phase1()
    if z == 0:
        x = decode(tab.solution())
        if not _check_feasible(system, x):
            raise TverbergError("internal: simplex produced an invalid point")
        return LpFeasible(x)
    mu = tuple(tab.dual_from_obj(ONE))
    if not _check_farkas(system, mu):
        raise TverbergError("internal: simplex produced an invalid Farkas witness")
    return LpInfeasible(mu)


@dataclass(frozen=True)
class StandardOptimum:
    value: Fraction
    x: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]


def minimize_standard(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    costs: Sequence[Fraction],
):
    """min c.x  s.t.  A x = b, x >= 0 (exact).

    Returns StandardOptimum, LpInfeasible (Farkas y with y.A <= 0, y.b > 0),
    or the string "unbounded".
    """
    tab = _Tableau([list(map(Fraction, r)) for r in rows], [Fraction(b) for b in rhs])
    z = tab.phase1()
    if z != 0:
        return LpInfeasible(tuple(tab.dual_from_obj(ONE)))
    tab.purge_artificials()
    try:
        val = tab.phase2([Fraction(c) for c in costs])
    except _Unbounded:
        return "unbounded"
    x = tab.solution()
    y = tab.dual_from_obj(ZERO)
    return StandardOptimum(val, tuple(x), tuple(y))

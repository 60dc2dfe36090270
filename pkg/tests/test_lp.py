from fractions import Fraction

from tverberg.lp import (
    EQ,
    GE,
    LE,
    LinearSystem,
    LpFeasible,
    LpInfeasible,
    lp_feasible,
    minimize_standard,
)
from tverberg.rng import SplitMix64

F = Fraction


def test_contradictory_bounds_infeasible_with_witness():
    s = LinearSystem(1)
    s.add([F(1)], GE, F(0))
    s.add([F(1)], LE, F(-1))
    res = lp_feasible(s)
    assert isinstance(res, LpInfeasible)
    # witness already validated internally; sanity-check signs here
    mu = res.multipliers
    assert mu[0] >= 0 and mu[1] <= 0


def test_simplex_face_feasible():
    s = LinearSystem(2, nonneg=frozenset({0, 1}))
    s.add([F(1), F(1)], EQ, F(1))
    res = lp_feasible(s)
    assert isinstance(res, LpFeasible)
    x, y = res.assignment
    assert x >= 0 and y >= 0 and x + y == 1


def test_random_systems_built_around_interior_point():
    # Oracle: constraints generated to hold at a known point stay feasible.
    rng = SplitMix64(5)
    for _ in range(25):
        nv = 4
        x0 = [F(rng.below(9)) - 4 for _ in range(nv)]
        s = LinearSystem(nv)
        for _ in range(8):
            coeffs = [F(rng.below(11)) - 5 for _ in range(nv)]
            val = sum(c * v for c, v in zip(coeffs, x0))
            kind = rng.below(3)
            if kind == 0:
                s.add(coeffs, LE, val + rng.below(3))
            elif kind == 1:
                s.add(coeffs, GE, val - rng.below(3))
            else:
                s.add(coeffs, EQ, val)
        res = lp_feasible(s)
        assert isinstance(res, LpFeasible)


def test_unbounded_direction_is_still_feasible():
    s = LinearSystem(2)
    s.add([F(1), F(0)], GE, F(3))
    res = lp_feasible(s)
    assert isinstance(res, LpFeasible)
    assert res.assignment[0] >= 3


def test_farkas_on_random_infeasible_pairs():
    rng = SplitMix64(6)
    for _ in range(15):
        nv = 3
        coeffs = [F(rng.below(7)) - 3 for _ in range(nv)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = F(1)
        s = LinearSystem(nv)
        s.add(coeffs, GE, F(2))
        s.add(coeffs, LE, F(1))
        res = lp_feasible(s)
        assert isinstance(res, LpInfeasible)


def test_minimize_standard_small_optimum():
    # min x0 + 2 x1  s.t.  x0 + x1 = 2, x >= 0  ->  optimum 2 at (2, 0).
    res = minimize_standard([[F(1), F(1)]], [F(2)], [F(1), F(2)])
    assert res.value == 2
    assert res.x == (F(2), F(0))


def test_minimize_standard_infeasible():
    res = minimize_standard([[F(1)], [F(1)]], [F(1), F(2)], [F(0)])
    assert isinstance(res, LpInfeasible)


def test_minimize_standard_unbounded():
    # min -x0 s.t. x0 - x1 = 0, x >= 0: both can grow together.
    res = minimize_standard([[F(1), F(-1)]], [F(0)], [F(-1), F(0)])
    assert res == "unbounded"

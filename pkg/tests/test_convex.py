import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tverberg.convex import (
    COMMON_INFEASIBLE,
    CommonPointFeasible,
    ConvexCombination,
    HullInside,
    HullOutside,
    common_point,
    hull_membership,
    radon_partition,
    sparsify,
)
from tverberg.geometry import (
    BarycentricInside,
    Point,
    PointSet,
    Simplex,
    orientation,
    point_in_simplex,
    pt,
)
from tverberg.rng import SplitMix64

F = Fraction


# --- radon_partition -------------------------------------------------------


def test_radon_1d_midpoint():
    res = radon_partition([pt(0), pt(2), pt(1)])
    assert res.radon_point.coords == (F(1),)
    values = [0, 2, 1]
    side_vals = {
        tuple(sorted(values[i] for i in side)) for side in (res.side_a, res.side_b)
    }
    assert side_vals == {(0, 2), (1,)}
    comb = res.comb_a if len(res.side_a) == 2 else res.comb_b
    assert sorted(comb.weights.values()) == [F(1, 2), F(1, 2)]


def test_radon_square_diagonals():
    pts = [pt(0, 0), pt(2, 0), pt(0, 2), pt(2, 2)]
    res = radon_partition(pts)
    assert res.radon_point.coords == (F(1), F(1))
    sides = {tuple(sorted(res.side_a)), tuple(sorted(res.side_b))}
    assert sides == {(0, 3), (1, 2)}


def _bipartition_oracle(pts):
    """All 2-part splits of four 2D points whose hulls intersect (exact)."""
    ps = PointSet(pts)
    good = []
    for r in range(1, 4):
        for side in itertools.combinations(range(4), r):
            other = tuple(i for i in range(4) if i not in side)
            if min(side) != 0:
                continue  # canonical: side A holds index 0
            inter = common_point([list(side), list(other)], ps)
            if isinstance(inter, CommonPointFeasible):
                good.append((side, other))
    return good


def test_radon_random_matches_bipartition_oracle():
    rng = SplitMix64(12)
    for _ in range(120):
        pts = [Point((rng.unit_fraction(), rng.unit_fraction())) for _ in range(4)]
        if any(
            orientation([pts[i], pts[j], pts[k]]) == 0
            for i, j, k in itertools.combinations(range(4), 3)
        ):
            continue
        res = radon_partition(pts)
        # Exact reconstruction on both sides.
        for comb in (res.comb_a, res.comb_b):
            assert sum(comb.weights.values()) == 1
            rec = [F(0), F(0)]
            for i, w in comb.weights.items():
                rec[0] += w * pts[i][0]
                rec[1] += w * pts[i][1]
            assert tuple(rec) == res.radon_point.coords
        assert sorted(res.side_a + res.side_b) == [0, 1, 2, 3]
        # The returned bipartition appears among the intersecting ones.
        canon = tuple(sorted(res.side_a if 0 in res.side_a else res.side_b))
        good = _bipartition_oracle(pts)
        assert any(side == canon for side, _ in good)


# --- sparsify ---------------------------------------------------------------


def test_sparsify_small_support_unchanged():
    ps = PointSet.from_rows([[0, 0], [1, 0], [0, 1]])
    comb = ConvexCombination({0: F(1, 2), 1: F(1, 2)}, pt(F(1, 2), 0))
    out = sparsify(comb, ps)
    assert out.weights == comb.weights


def test_sparsify_1d():
    ps = PointSet.from_rows([[0], [1], [2]])
    comb = ConvexCombination({0: F(1, 4), 1: F(1, 2), 2: F(1, 4)}, pt(1))
    out = sparsify(comb, ps)
    assert len(out.support) <= 2
    assert out.validate(ps)


def test_sparsify_centroid_of_seven():
    rng = SplitMix64(40)
    rows = [[rng.unit_fraction(), rng.unit_fraction()] for _ in range(7)]
    ps = PointSet.from_rows(rows)
    target = Point(
        tuple(sum(ps[i][c] for i in range(7)) / 7 for c in range(2))
    )
    comb = ConvexCombination({i: F(1, 7) for i in range(7)}, target)
    out = sparsify(comb, ps)
    assert len(out.support) <= 3
    assert out.validate(ps)


def test_sparsify_preserves_target_at_every_size():
    rng = SplitMix64(44)
    for m in (5, 8, 12):
        rows = [[rng.unit_fraction() for _ in range(3)] for _ in range(m)]
        ps = PointSet.from_rows(rows)
        weights = {i: F(1, m) for i in range(m)}
        target = Point(tuple(sum(ps[i][c] for i in range(m)) / m for c in range(3)))
        out = sparsify(ConvexCombination(weights, target), ps)
        assert len(out.support) <= 4
        assert out.validate(ps)


# --- hull_membership --------------------------------------------------------


def test_vertex_is_inside_with_unit_weight():
    ps = PointSet.from_rows([[0, 0], [3, 1], [1, 4]])
    res = hull_membership(ps[1], ps)
    assert isinstance(res, HullInside)
    assert res.combination.weights == {1: F(1)}


def test_point_beyond_bbox_is_outside():
    ps = PointSet.from_rows([[0, 0], [1, 0], [0, 1]])
    res = hull_membership(pt(5, 5), ps)
    assert isinstance(res, HullOutside)
    assert res.witness.validate(pt(5, 5), ps)


def test_empty_hull_is_outside():
    res = hull_membership(pt(1, 2), None)
    assert isinstance(res, HullOutside)


def _facet_oracle_3d(q: Point, ps: PointSet) -> bool:
    """Membership via supporting-plane enumeration over point triples."""
    n = ps.n
    for tri in itertools.combinations(range(n), 3):
        a, b, c = (ps[i] for i in tri)
        signs = set()
        for i in range(n):
            if i in tri:
                continue
            signs.add(orientation([a, b, c, ps[i]]))
        if 1 in signs and -1 in signs:
            continue  # not a supporting plane
        side = 1 if 1 in signs else (-1 if -1 in signs else 0)
        qs = orientation([a, b, c, q])
        if side != 0 and qs != 0 and qs != side:
            return False
    return True


def test_membership_matches_facet_oracle_3d():
    rng = SplitMix64(50)
    checked = 0
    for _ in range(40):
        rows = [[rng.unit_fraction() for _ in range(3)] for _ in range(12)]
        ps = PointSet.from_rows(rows)
        q = Point(tuple(rng.unit_fraction() for _ in range(3)))
        verdict = hull_membership(q, ps)
        inside = isinstance(verdict, HullInside)
        assert inside == _facet_oracle_3d(q, ps)
        if inside:
            assert verdict.combination.validate(ps)
            assert len(verdict.combination.support) <= 4
        else:
            assert verdict.witness.validate(q, ps)
        checked += 1
    assert checked == 40


def test_membership_never_both_and_sparsified():
    rng = SplitMix64(51)
    for _ in range(50):
        rows = [[rng.unit_fraction(), rng.unit_fraction()] for _ in range(9)]
        ps = PointSet.from_rows(rows)
        q = Point((rng.unit_fraction(), rng.unit_fraction()))
        verdict = hull_membership(q, ps)
        if isinstance(verdict, HullInside):
            assert verdict.combination.validate(ps)
            assert len(verdict.combination.support) <= 3
        else:
            assert verdict.witness.validate(q, ps)


# --- common_point ------------------------------------------------------------


def test_common_point_1d_overlapping_segments():
    ps = PointSet.from_rows([[0], [1], [2], [3]])
    res = common_point([[0, 2], [1, 3]], ps)
    assert isinstance(res, CommonPointFeasible)
    q = res.point[0]
    assert 1 <= q <= 2
    for comb in res.combinations:
        assert comb.validate(ps)


def test_common_point_disjoint_segments_infeasible():
    ps = PointSet.from_rows([[0], [1], [5], [6]])
    assert common_point([[0, 1], [2, 3]], ps) is COMMON_INFEASIBLE


def test_common_point_single_batch_vertex():
    ps = PointSet.from_rows([[2, 7], [5, 1]])
    res = common_point([[1, 0]], ps)
    assert isinstance(res, CommonPointFeasible)
    assert isinstance(
        point_in_simplex(res.point, Simplex((0, 1)), ps), BarycentricInside
    )


def test_common_point_on_birch_triangles():
    from tverberg.planar import birch_partition
    from tverberg.families import generate

    ps = generate("uniform", 2, 30, 8)
    site = birch_partition(ps)
    batches = [list(b.indices) for b in site.log.batches]
    res = common_point(batches, ps)
    assert isinstance(res, CommonPointFeasible)
    for comb, batch in zip(res.combinations, batches):
        assert comb.validate(ps)
        assert set(comb.support) <= set(batch)


# --- property-based invariants ----------------------------------------------

coords = st.fractions(min_value=-4, max_value=4, max_denominator=16)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(coords, min_size=2, max_size=2), min_size=4, max_size=4))
def test_radon_properties(rows):
    pts = [Point(tuple(r)) for r in rows]
    if len({p.coords for p in pts}) < 4:
        return
    res = radon_partition(pts)
    assert sorted(res.side_a + res.side_b) == [0, 1, 2, 3]
    for comb in (res.comb_a, res.comb_b):
        assert sum(comb.weights.values()) == 1
        assert all(w >= 0 for w in comb.weights.values())
        rec0 = sum((w * pts[i][0] for i, w in comb.weights.items()), F(0))
        rec1 = sum((w * pts[i][1] for i, w in comb.weights.items()), F(0))
        assert (rec0, rec1) == res.radon_point.coords

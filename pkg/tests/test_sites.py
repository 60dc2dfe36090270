from fractions import Fraction

import pytest

from helpers import assert_valid_site, rand_ps
from tverberg.convex import ConvexCombination
from tverberg.errors import ContractViolation, PreconditionError
from tverberg.geometry import PointSet, pt
from tverberg.projection import project_tverberg
from tverberg.random_partition import random_partition_with_certificate
from tverberg.sites import (
    Batch,
    Log,
    Site,
    buffered_tverberg,
    merge_sites,
    miller_sheehy,
    singleton_site,
)
from tverberg.verify import verify_site

F = Fraction


def _singletons(ps: PointSet, indices):
    return [singleton_site(ps, i) for i in indices]


# --- merge_sites -----------------------------------------------------------


def test_merge_1d_singletons():
    ps = PointSet.from_rows([[0], [1], [2]])
    merged, recycled, _ = merge_sites(_singletons(ps, [0, 1, 2]), ps)
    assert merged.rank == 2
    assert merged.point.coords == (F(1),)
    batch_sets = {b.indices for b in merged.log.batches}
    assert batch_sets == {(0, 2), (1,)}
    assert recycled == set()
    assert verify_site(ps, merged).valid


def test_merge_square_corner_singletons():
    ps = PointSet.from_rows([[0, 0], [2, 0], [0, 2], [2, 2]])
    merged, recycled, _ = merge_sites(_singletons(ps, [0, 1, 2, 3]), ps)
    assert merged.rank == 2
    assert merged.point.coords == (F(1), F(1))
    assert {b.indices for b in merged.log.batches} == {(0, 3), (1, 2)}
    assert verify_site(ps, merged).valid


def test_merge_invariants_random():
    ps = rand_ps(2, 40, 91)
    sites = _singletons(ps, range(4))
    merged, recycled, _ = merge_sites(sites, ps)
    assert merged.rank == 2
    assert verify_site(ps, merged).valid
    assert not (recycled & merged.log.all_indices())
    used_or_recycled = recycled | merged.log.all_indices()
    assert used_or_recycled == {0, 1, 2, 3}


def test_merge_rejects_rank_mismatch():
    ps = rand_ps(2, 10, 92)
    bad = _singletons(ps, range(3))
    two = merge_sites(_singletons(ps, [4, 5, 6, 7]), ps)[0]
    with pytest.raises(PreconditionError):
        merge_sites(bad + [two], ps)


def test_merge_rejects_overlapping_logs():
    ps = rand_ps(2, 10, 93)
    sites = _singletons(ps, [0, 1, 2, 2])
    with pytest.raises(PreconditionError):
        merge_sites(sites, ps)


# --- miller_sheehy -----------------------------------------------------------


def test_ms_d1_n16():
    ps = rand_ps(1, 16, 201)
    site, hist = miller_sheehy(ps)
    assert site.rank >= 2
    assert site.rank & (site.rank - 1) == 0  # power of two
    assert_valid_site(ps, site, "ms d=1")


def test_ms_d2_n200_rank_bracket():
    ps = rand_ps(2, 200, 202)
    site, hist = miller_sheehy(ps)
    assert site.rank in (16, 32)
    assert_valid_site(ps, site, "ms d=2")


def test_ms_history_bound():
    ps = rand_ps(2, 200, 203)
    site, hist = miller_sheehy(ps)
    h = hist.max_rank_exponent
    d = 2
    assert 1 << h == site.rank
    for rank, count in hist.count_by_rank.items():
        i = h - (rank.bit_length() - 1)
        assert i >= 0
        assert count <= (d + 2) ** (i + 1) - 1, (rank, count)


def test_ms_conservation():
    ps = rand_ps(2, 60, 204)
    site, _ = miller_sheehy(ps)
    used = site.log.all_indices()
    assert used | set(site.unused) == set(range(60))
    assert not (used & set(site.unused))


def test_ms_small_input_rank_one():
    ps = PointSet.from_rows([[0, 0], [1, 1]])
    site, _ = miller_sheehy(ps)
    assert site.rank == 1
    assert_valid_site(ps, site, "ms tiny")


def test_truncation_preserves_validity():
    ps = rand_ps(2, 120, 205)
    site, _ = miller_sheehy(ps)
    for keep in range(1, site.rank):
        trimmed = Site(site.point, Log(site.log.batches[:keep]), site.unused)
        assert verify_site(ps, trimmed).valid


# --- buffered_tverberg --------------------------------------------------------


def test_buffered_projection_base_d2():
    n = 600
    ps = rand_ps(2, n, 206)
    site, _ = buffered_tverberg(ps, F(1, 2), project_tverberg)
    assert site.rank >= 17  # (1-delta) n / (2 (d+1)^2) = 300/18
    assert_valid_site(ps, site, "buffered projection")


def test_buffered_birch_base_degenerate_choice():
    from tverberg.planar import birch_partition

    n = 300
    ps = rand_ps(2, n, 207)
    site, _ = buffered_tverberg(ps, F(1, 2), birch_partition)
    assert site.rank >= -(-int(F(1, 2) * n) // 18)
    assert_valid_site(ps, site, "buffered birch")


def test_buffered_rejects_invalid_base_site():
    ps = rand_ps(2, 60, 208)

    def cheat(sub: PointSet) -> Site:
        q = pt(F(1, 2), F(1, 2))
        comb = ConvexCombination({0: F(1)}, q)  # does not reconstruct q
        return Site(q, Log((Batch((0,), comb),)))

    with pytest.raises(ContractViolation):
        buffered_tverberg(ps, F(1, 2), cheat)


def test_buffered_conservation_and_rank_monotone():
    n = 420
    ps = rand_ps(2, n, 209)
    site, hist = buffered_tverberg(ps, F(1, 4), project_tverberg)
    used = site.log.all_indices()
    assert used | set(site.unused) == set(range(n))
    assert site.rank >= -(-int(F(3, 4) * n) // 18)
    assert_valid_site(ps, site, "buffered conservation")


def test_buffered_random_lp_stall_regime_d3():
    # delta*n below the base's net size: the engine keeps extracting while
    # the buffer stays above the net size, then stalls; the power-of-two
    # output still clears (1-delta) n / 2(d+1)^2.
    n = 2000
    ps = rand_ps(3, n, 210)
    base = lambda sub: random_partition_with_certificate(sub, 77)
    site, _ = buffered_tverberg(ps, F(1, 4), base)
    assert site.rank >= 47  # ceil(0.75 * 2000 / 32)
    assert_valid_site(ps, site, "buffered stall regime")

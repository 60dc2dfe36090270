"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
summary lines.  Tolerances and thresholds are pinned here, not configurable.
"""

import time
from fractions import Fraction

import pytest

from helpers import rand_ps
from tverberg.convex import COMMON_INFEASIBLE, common_point
from tverberg.errors import GeneralPositionViolation
from tverberg.exact import exact_tverberg
from tverberg.families import generate
from tverberg.geometry import Point
from tverberg.lowdim import extract_tverberg
from tverberg.planar import _depth_core, birch_partition, centerpoint_2d, tukey_depth_2d, tverberg_log_2d
from tverberg.projection import project_tverberg
from tverberg.random_partition import (
    net_size,
    random_coloring_partition,
    random_partition_with_certificate,
)
from tverberg.rng import SplitMix64
from tverberg.sites import Site, buffered_tverberg, merge_sites, miller_sheehy, singleton_site
from tverberg.verify import brute_tukey_depth, verify_site

F = Fraction


def _ok(msg: str) -> None:
    print(f"\nACCEPTANCE {msg}")


def _checked(ps, site: Site, context: str) -> None:
    report = verify_site(ps, site)
    assert report.valid, f"{context}: certificate invalid: {report.violations[:3]}"


def test_c01_exact_tverberg_bound():
    """Exact solver: rank exactly n/(d+1), certified, <= 5 s per instance."""
    worst = 0.0
    for trial in range(50):
        n = (6, 9, 12)[trial % 3]
        ps = rand_ps(2, n, 10_000 + trial)
        start = time.perf_counter()
        site = exact_tverberg(ps)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        assert elapsed <= 5.0, f"instance {trial} took {elapsed:.2f}s"
        assert site.rank == n // 3 == -(-n // 3)
        _checked(ps, site, f"exact trial {trial}")
    _ok(f"1: PASS - exact rank n/3 on 50 instances, worst {worst:.2f}s <= 5s")


def test_c02_birch_rank_and_large_n():
    """Birch: rank floor(n/3) with certificates; n=1e5 within 60 s."""
    rng = SplitMix64(2024)
    for trial in range(99):
        n = 9 + rng.below(280)
        ps = rand_ps(2, n, 20_000 + trial)
        site = birch_partition(ps)
        assert site.rank == n // 3, (trial, n)
        _checked(ps, site, f"birch trial {trial}")
    ps = rand_ps(2, 100_000, 20_999)
    start = time.perf_counter()
    site = birch_partition(ps)
    elapsed = time.perf_counter() - start
    assert site.rank == 100_000 // 3
    _checked(ps, site, "birch n=1e5")
    assert elapsed <= 60.0, f"n=1e5 took {elapsed:.1f}s"
    _ok(f"2: PASS - birch rank floor(n/3) on 100 instances; n=1e5 in {elapsed:.1f}s <= 60s")


def test_c03_tukey_oracle_equivalence():
    """tukey_depth_2d equals the brute-force oracle on 500 instances."""
    rng = SplitMix64(3033)
    mismatches = 0
    done = 0
    trial = 0
    while done < 500:
        trial += 1
        n = 3 + rng.below(62)
        ps = rand_ps(2, n, 30_000 + trial)
        q = Point((rng.unit_fraction(), rng.unit_fraction()))
        try:
            res = tukey_depth_2d(ps, q)
        except GeneralPositionViolation:
            continue
        if res.depth != brute_tukey_depth(ps, q):
            mismatches += 1
        done += 1
    assert mismatches == 0
    _ok("3: PASS - 500/500 depth values match the brute oracle, zero mismatches")


def test_c04_support_theorem():
    """tverberg_log rank = min(floor(n/3), depth), shallow and deep mixes."""
    rng = SplitMix64(4044)
    shallow = deep = 0
    done = 0
    trial = 0
    while done < 200:
        trial += 1
        n = 9 + rng.below(40)
        ps = rand_ps(2, n, 40_000 + trial)
        if done % 2 == 0:
            q = Point((rng.unit_fraction(), rng.unit_fraction()))
        else:
            q = centerpoint_2d(ps)
        try:
            k, log = tverberg_log_2d(ps, q)
        except GeneralPositionViolation:
            continue
        assert log.rank == min(n // 3, k), (trial, n, k)
        if log.rank:
            _checked(ps, Site(q, log), f"support trial {trial}")
        if 3 * k <= n:
            shallow += 1
        else:
            deep += 1
        done += 1
    assert shallow >= 40 and deep >= 40, (shallow, deep)
    _ok(f"4: PASS - 200 instances ({shallow} shallow, {deep} deep), rank = min(floor(n/3), k)")


def test_c05_miller_sheehy_bounds():
    """Output rank bracket and history count bound, d in {1,2,3}."""
    rng = SplitMix64(5055)
    count = 0
    for d, block in ((1, 34), (2, 33), (3, 33)):
        floor_n = 8 * d * (d + 1) ** 2
        for trial in range(block):
            n = floor_n + rng.below(max(floor_n // 4, 8))
            ps = rand_ps(d, n, 50_000 + 1000 * d + trial)
            site, hist = miller_sheehy(ps)
            lo = -(-n // (2 * (d + 1) ** 2))
            hi = (2 * n) // ((d + 1) ** 2)
            assert lo <= site.rank <= hi, (d, n, site.rank)
            assert site.rank & (site.rank - 1) == 0
            h = hist.max_rank_exponent
            assert 1 << h == site.rank
            for rank, cnt in hist.count_by_rank.items():
                i = h - (rank.bit_length() - 1)
                assert cnt <= (d + 2) ** (i + 1) - 1, (d, n, rank, cnt)
            _checked(ps, site, f"ms d={d} trial {trial}")
            count += 1
    assert count == 100
    _ok("5: PASS - 100 instances: rank in [ceil(n/2(d+1)^2), 2n/(d+1)^2], history bound holds")


def test_c06_buffered_variant():
    """Buffered engine with projection and random-lp bases, both dims."""
    cells = [
        (2, F(1, 4), "project", 5000),
        (2, F(1, 2), "random-lp", 600),
        (3, F(1, 4), "project", 5000),
        (3, F(1, 2), "random-lp", 1200),
    ]
    results = []
    for d, delta, base_name, n in cells:
        ps = rand_ps(d, n, 60_000 + n + d)
        if base_name == "project":
            base = project_tverberg
        else:
            base = lambda sub: random_partition_with_certificate(sub, 4242)
        site, _ = buffered_tverberg(ps, delta, base)
        need = -(-int((1 - delta) * n) // (2 * (d + 1) ** 2))
        assert site.rank >= need, (d, str(delta), base_name, n, site.rank, need)
        _checked(ps, site, f"buffered {base_name} d={d}")
        results.append(f"d={d} delta={delta} {base_name} n={n}: rank {site.rank} >= {need}")
    _ok("6: PASS - " + "; ".join(results))


def test_c07_projection_depth_table():
    """Projection ranks match the low-dimension depth table."""
    rows = []
    for d, divisor in ((3, 6), (4, 9), (5, 18), (6, 27)):
        n = divisor * (10 if d <= 4 else 4)
        ps = rand_ps(d, n, 70_000 + d)
        site = project_tverberg(ps)
        assert site.rank >= n // divisor, (d, n, site.rank)
        _checked(ps, site, f"projection d={d}")
        rows.append(f"d={d}: rank {site.rank} >= n/{divisor} = {n // divisor}")
    _ok("7: PASS - " + "; ".join(rows))


def test_c08_random_coloring_success_rate():
    """common_point validates the epsilon-net coloring in >= 90% of runs."""
    rates = []
    for d in (2, 3):
        n = 2 * net_size(d, F(1, d + 1))
        ps = rand_ps(d, n, 80_000 + d)
        ok = 0
        runs = 100
        for seed in range(runs):
            classes = random_coloring_partition(ps, seed)
            if common_point(classes, ps) is not COMMON_INFEASIBLE:
                ok += 1
        assert ok >= int(0.9 * runs), (d, ok)
        rates.append(f"d={d}: {ok}/{runs}")
    _ok("8: PASS - coloring validated in >= 90% of 200 seeded runs (" + ", ".join(rates) + ")")


def test_c09_lowdim_extraction():
    """Extraction reaches the (1-delta) n / d(d+1) rank in >= 90% of seeds."""
    summaries = []
    for d, n in ((2, 600), (3, 360)):
        for delta in (F(1, 4), F(1, 2)):
            target = int((1 - delta) * n) // (d * (d + 1))
            good = 0
            seeds = 10
            for seed in range(seeds):
                try:
                    site = extract_tverberg(ps := rand_ps(d, n, 90_000 + seed + d), delta, seed)
                except Exception:
                    continue
                if site.rank >= target:
                    _checked(ps, site, f"lowdim d={d} delta={delta} seed={seed}")
                    good += 1
            assert good >= int(0.9 * seeds), (d, str(delta), good)
            summaries.append(f"d={d} delta={delta}: {good}/{seeds} >= rank {target}")
    _ok("9: PASS - " + "; ".join(summaries))


def test_c10_global_certificate_gate():
    """Every site emitted by every producer verifies exactly."""
    produced = []
    ps2 = rand_ps(2, 60, 100_001)
    produced.append((ps2, birch_partition(ps2), "birch"))
    ps_exact = rand_ps(2, 12, 100_002)
    produced.append((ps_exact, exact_tverberg(ps_exact), "exact"))
    ps3 = rand_ps(3, 66, 100_003)
    produced.append((ps3, project_tverberg(ps3), "project"))
    ms_site, _ = miller_sheehy(rand_ps(2, 160, 100_004))
    produced.append((rand_ps(2, 160, 100_004), ms_site, "ms"))
    psb = rand_ps(2, 480, 100_005)
    produced.append((psb, buffered_tverberg(psb, F(1, 2), project_tverberg)[0], "buffered"))
    psr = rand_ps(2, 600, 100_006)
    produced.append((psr, random_partition_with_certificate(psr, 7), "random-lp"))
    psl = rand_ps(2, 300, 100_007)
    produced.append((psl, extract_tverberg(psl, F(1, 2), 7), "lowdim"))
    q, log = None, None
    psq = rand_ps(2, 33, 100_008)
    qpt = centerpoint_2d(psq)
    k, log = tverberg_log_2d(psq, qpt)
    produced.append((psq, Site(qpt, log), "tverberg-log"))
    merged, _, _ = merge_sites([singleton_site(ps2, i) for i in range(4)], ps2)
    produced.append((ps2, merged, "merge"))
    for ps, site, name in produced:
        report = verify_site(ps, site)
        assert report.valid, (name, report.violations[:3])
    _ok(f"10: PASS - {len(produced)} producers, every emitted site verifies exactly")


def test_c11_determinism(tmp_path):
    """Byte-identical certificates and bench tables on repeated runs."""
    from tverberg.cli import main

    ps = rand_ps(2, 120, 110_000)
    from tverberg.io import save_points

    pts = tmp_path / "pts.csv"
    save_points(ps, pts)
    pair = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = main(
            ["partition", str(pts), "--algo", "ms", "--seed", "3", "--out", str(out)]
        )
        assert code == 0
        pair.append(out.read_bytes())
    assert pair[0] == pair[1]
    bench_pair = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert (
            main(
                [
                    "bench",
                    "--family",
                    "gaussian",
                    "--d",
                    "2",
                    "--n-list",
                    "36,60",
                    "--algos",
                    "birch,project,lowdim",
                    "--seeds",
                    "0,1",
                    "--delta",
                    "1/2",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        bench_pair.append(out.read_bytes())
    assert bench_pair[0] == bench_pair[1]
    _ok("11: PASS - certificates and bench tables byte-identical across reruns")

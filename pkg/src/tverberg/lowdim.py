"""Sampling + centerpoint + repeated hull-extraction partitioner.

Pipeline: draw a relative-approximation sample, find a deep point c of the
sample, then repeatedly extract a small batch whose hull contains c: each
round samples an epsilon_i-net of the remaining points (the schedule
tracks the depth lower bound b_i = floor(n/(d+1)) - d(i-1) against the
remaining count), asks exact hull membership of c in the sample, and
removes the support of the sparsified combination.  Failed samples are
redrawn up to a cap; the run stops at the target rank or as soon as c is
exposed (membership over all remaining points fails).

Sample-size constants are tunable; they trade work against failure rate,
not correctness, since every batch certificate is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .convex import HullInside, hull_membership
from .errors import InputTooSmall, ScaleCapExceeded, SearchFailure
from .geometry import Point, PointSet
from .rng import SplitMix64, derive_seed
from .sites import Batch, Log, Site
from .verify import brute_tukey_depth

ZERO = Fraction(0)


@dataclass(frozen=True)
class ExtractParams:
    """Tunable knobs: sample-size constants and the resample cap."""

    sample_constant: int = 8  # C in m = C d^2 delta^-2 ln(d+1)
    net_constant: int = 8  # C' in r_i = C' (d/eps) ln(1/eps)
    resample_cap: int = 32
    exact_center_cap: int = 48  # brute-verified centerpoint up to this sample size


def _float_depth_estimate(ps: PointSet, c: Point, seed: int, directions: int = 128) -> int:
    rng = SplitMix64(seed)
    d = ps.dim
    pts = [p.as_floats() for p in ps]
    cf = c.as_floats()
    best = len(pts)
    for _ in range(directions):
        u = [rng.unit_float() - 0.5 for _ in range(d)]
        norm = math.sqrt(sum(x * x for x in u)) or 1.0
        u = [x / norm for x in u]
        count = sum(
            1 for p in pts if sum(up * (a - b) for up, a, b in zip(u, p, cf)) >= 0
        )
        best = min(best, count)
    return best


def _center_candidates(sample: PointSet, seed: int):
    from .random_partition import iterated_radon_centerpoint

    n, d = sample.n, sample.dim
    acc = [ZERO] * d
    for p in sample:
        for c in range(d):
            acc[c] += p[c]
    yield Point(tuple(v / n for v in acc))
    cols = [sorted(p[c] for p in sample) for c in range(d)]
    yield Point(tuple(col[(n - 1) // 2] for col in cols))
    if n >= d + 2:
        for attempt in range(4):
            yield iterated_radon_centerpoint(sample, derive_seed(seed, 100 + attempt))


def _sample_centerpoint(sample: PointSet, seed: int, params: ExtractParams) -> Point:
    """A deep point of the sample.

    d = 2 uses the exact planar centerpoint.  Higher dimensions screen a
    deterministic candidate list; at oracle scale each candidate's depth is
    verified exactly (brute halfspace enumeration) and the first true
    1/(d+1)-centerpoint wins, otherwise the candidate with the best
    estimated depth is used.
    """
    d = sample.dim
    if d == 2:
        from .planar import centerpoint_2d

        return centerpoint_2d(sample)
    need = -(-sample.n // (d + 1))
    best, best_depth = None, -1
    for cand in _center_candidates(sample, seed):
        if sample.n <= params.exact_center_cap and d <= 3:
            depth = brute_tukey_depth(sample, cand)
            if depth >= need:
                return cand
        else:
            depth = _float_depth_estimate(sample, cand, derive_seed(seed, 7))
        if depth > best_depth:
            best, best_depth = cand, depth
    return best


def extract_tverberg(
    ps: PointSet,
    delta: Fraction,
    seed: int,
    params: ExtractParams | None = None,
) -> Site:
    """Site of target rank floor((1-delta) n / (d (d+1))).

    The returned rank can fall short when the deep point gets exposed
    early (adversarial inputs, unlucky sampling); callers compare against
    the target.  Every batch carries an exact certificate.
    """
    params = params or ExtractParams()
    d, n = ps.dim, ps.n
    delta = Fraction(delta)
    if d > 8:
        raise ScaleCapExceeded("extraction supports d <= 8")
    if not 0 < delta < 1:
        raise SearchFailure("delta must be in (0,1)")
    if n < d * (d + 1):
        raise InputTooSmall("extraction needs n >= d(d+1)")
    target = int((1 - delta) * n) // (d * (d + 1))
    m = math.ceil(params.sample_constant * d * d * float(delta) ** -2 * math.log(d + 1))
    rng = SplitMix64(derive_seed(seed, 0))
    if m >= n:
        sample = ps
    else:
        sample = ps.subset(sorted(rng.sample_indices(n, m)))
    center = _sample_centerpoint(sample, derive_seed(seed, 1), params)

    remaining = sorted(range(n))
    batches: list[Batch] = []
    round_no = 0
    while len(batches) < target and remaining:
        round_no += 1
        b_i = max(n // (d + 1) - d * (round_no - 1), 1)
        eps = min(Fraction(b_i, len(remaining)), Fraction(1))
        log_term = max(1.0, math.log(1.0 / float(eps)))
        r_i = math.ceil(params.net_constant * d / float(eps) * log_term)
        r_i = max(d + 1, min(r_i, len(remaining)))
        got = None
        for attempt in range(params.resample_cap):
            child = SplitMix64(derive_seed(seed, (round_no << 8) | attempt))
            pick = sorted(
                remaining[j] for j in child.sample_indices(len(remaining), r_i)
            )
            verdict = hull_membership(center, ps, pick)
            if isinstance(verdict, HullInside):
                got = verdict.combination
                break
            if r_i == len(remaining):
                break  # the sample was everything: c is exposed
        if got is None:
            full = hull_membership(center, ps, remaining)
            if isinstance(full, HullInside):
                raise SearchFailure(
                    f"extraction resample cap {params.resample_cap} exceeded"
                )
            break  # center exposed: no batch in the remaining points holds it
        support = got.support
        batches.append(Batch(support, got))
        taken = set(support)
        remaining = [i for i in remaining if i not in taken]
    return Site(center, Log(tuple(batches)), tuple(remaining))

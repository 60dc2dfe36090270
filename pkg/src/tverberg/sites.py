"""Site data model and the merge-and-recycle partition engine.

A *batch* is at most d+1 point indices together with an exact convex
combination witnessing that the owning site's point lies in the batch
hull.  A *log* is a family of vertex-disjoint batches; a *site* is a point
plus its log.  Rank = number of batches.

Two engines operate on pools of sites grouped by rank:

* :func:`miller_sheehy`: every input point starts as a rank-1 singleton
  site; whenever some rank holds d+2 sites they are merged into one site
  of double rank, and the indices the merged log no longer uses are
  recycled as fresh singletons.  Stops when no rank can merge.
* :func:`buffered_tverberg`: same merge cascade, but points start in a
  buffer of free points; a pluggable base solver converts chunks of the
  buffer into sites (truncated to power-of-two rank), and recycled
  indices return to the buffer instead of becoming singletons.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .convex import ConvexCombination, combination_point, radon_partition, sparsify
from .errors import ContractViolation, InputTooSmall, PreconditionError
from .geometry import Point, PointSet

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Batch:
    indices: tuple[int, ...]
    witness: ConvexCombination

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))


@dataclass(frozen=True)
class Log:
    batches: tuple[Batch, ...]

    @property
    def rank(self) -> int:
        return len(self.batches)

    def all_indices(self) -> set[int]:
        out: set[int] = set()
        for b in self.batches:
            out.update(b.indices)
        return out


@dataclass(frozen=True)
class Site:
    point: Point
    log: Log
    unused: tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return self.log.rank

    def violations(self, ps: PointSet, d: int | None = None) -> list[str]:
        """Exact validity check; empty list means the certificate holds."""
        d = ps.dim if d is None else d
        out: list[str] = []
        seen: set[int] = set()
        for k, b in enumerate(self.log.batches):
            if len(b.indices) > d + 1:
                out.append(f"batch {k}: {len(b.indices)} indices exceeds d+1={d + 1}")
            for i in b.indices:
                if not 0 <= i < ps.n:
                    out.append(f"batch {k}: index {i} out of range")
                elif i in seen:
                    out.append(f"batch {k}: index {i} reused across batches")
                seen.add(i)
            w = b.witness
            if any(v < 0 for v in w.weights.values()):
                out.append(f"batch {k}: negative weight")
            if sum(w.weights.values(), ZERO) != 1:
                out.append(f"batch {k}: weights do not sum to 1")
            if not set(w.support) <= set(b.indices):
                out.append(f"batch {k}: witness support outside batch")
            if w.target.coords != self.point.coords:
                out.append(f"batch {k}: witness target differs from site point")
            elif any(not 0 <= i < ps.n for i in w.support):
                pass  # already reported
            elif combination_point(w.weights, ps).coords != self.point.coords:
                out.append(f"batch {k}: weights do not reconstruct the site point")
        return out

    def is_valid(self, ps: PointSet) -> bool:
        return not self.violations(ps)


def singleton_site(ps: PointSet, index: int, unused: tuple[int, ...] = ()) -> Site:
    p = ps[index]
    comb = ConvexCombination({index: ONE}, p)
    return Site(p, Log((Batch((index,), comb),)), unused)


def with_complement_unused(site: Site, n: int) -> Site:
    used = site.log.all_indices()
    return Site(site.point, site.log, tuple(i for i in range(n) if i not in used))


@dataclass
class HistoryStats:
    """Counts of sites ever created, per rank, plus merge work accounting."""

    max_rank_exponent: int = 0
    count_by_rank: dict[int, int] = field(default_factory=dict)
    work_by_rank: dict[int, int] = field(default_factory=dict)

    def created(self, rank: int, count: int = 1) -> None:
        self.count_by_rank[rank] = self.count_by_rank.get(rank, 0) + count
        exp = rank.bit_length() - 1
        if rank == 1 << exp and exp > self.max_rank_exponent:
            self.max_rank_exponent = exp

    def worked(self, rank: int, units: int) -> None:
        self.work_by_rank[rank] = self.work_by_rank.get(rank, 0) + units


def merge_sites(sites: list[Site], ps: PointSet):
    """Merge d+2 equal-rank, log-disjoint sites into one of double rank.

    The merged point is the Radon point of the d+2 site points.  Batch j of
    the merged log, for the sites on one Radon side, re-expresses the Radon
    point through each side site's j-th batch witness and is then sparsified
    to at most d+1 indices.  Returns (merged site, recycled index set): the
    input log indices the merged log no longer touches.
    """
    d = ps.dim
    if len(sites) != d + 2:
        raise PreconditionError("merge needs exactly d+2 sites")
    rank = sites[0].rank
    if any(s.rank != rank for s in sites):
        raise PreconditionError("merge needs equal-rank sites")
    all_in: set[int] = set()
    for s in sites:
        mine = s.log.all_indices()
        if all_in & mine:
            raise PreconditionError("merge needs log-disjoint sites")
        all_in |= mine
    radon = radon_partition([s.point for s in sites])
    merged_batches: list[Batch] = []
    work = 0
    for side, comb in ((radon.side_a, radon.comb_a), (radon.side_b, radon.comb_b)):
        for j in range(rank):
            weights: dict[int, Fraction] = {}
            for si in side:
                a = comb.weights.get(si, ZERO)
                if a == 0:
                    continue
                for i, w in sites[si].log.batches[j].witness.weights.items():
                    if w != 0:
                        weights[i] = weights.get(i, ZERO) + a * w
            combo = sparsify(ConvexCombination(weights, radon.radon_point), ps)
            work += len(weights)
            merged_batches.append(Batch(combo.support, combo))
    merged = Site(radon.radon_point, Log(tuple(merged_batches)))
    used = merged.log.all_indices()
    recycled = all_in - used
    if merged.rank != 2 * rank or (recycled & used):
        raise ContractViolation("internal: merge invariants broken")
    return merged, recycled, work


class _Pools:
    """Rank-indexed FIFO pools with an eager lowest-rank-first merge cascade."""

    def __init__(self, ps: PointSet, history: HistoryStats):
        self.ps = ps
        self.d = ps.dim
        self.by_rank: dict[int, deque[Site]] = {}
        self.history = history

    def insert(self, site: Site) -> None:
        self.by_rank.setdefault(site.rank, deque()).append(site)
        self.history.created(site.rank)

    def cascade(self, recycle: Callable[[set[int]], None]) -> None:
        need = self.d + 2
        while True:
            ranks = [r for r, pool in self.by_rank.items() if len(pool) >= need]
            if not ranks:
                return
            r = min(ranks)
            pool = self.by_rank[r]
            group = [pool.popleft() for _ in range(need)]
            if not pool:
                del self.by_rank[r]
            merged, recycled, work = merge_sites(group, self.ps)
            self.history.worked(merged.rank, work)
            self.insert(merged)
            if recycled:
                recycle(recycled)

    def best(self) -> Site:
        top = max(self.by_rank)
        return self.by_rank[top][0]

    def log_points(self) -> set[int]:
        out: set[int] = set()
        for pool in self.by_rank.values():
            for s in pool:
                out |= s.log.all_indices()
        return out


def miller_sheehy(ps: PointSet) -> tuple[Site, HistoryStats]:
    """Merge-and-recycle engine over singleton sites.

    Every index starts as a rank-1 site; recycled indices re-enter as fresh
    singletons.  Returns the maximum-rank site at stall (its ``unused``
    lists all indices outside its own log) and the creation history.
    For n >= 8d(d+1)^2 the output rank 2^h satisfies
    ceil(n / 2(d+1)^2) <= 2^h <= 2n / (d+1)^2.
    """
    n, d = ps.n, ps.dim
    history = HistoryStats()
    if n < d + 2:
        history.created(1, n)
        return with_complement_unused(singleton_site(ps, 0), n), history
    pools = _Pools(ps, history)

    def recycle(indices: set[int]) -> None:
        for i in sorted(indices):
            pools.insert(singleton_site(ps, i))

    for i in range(n):
        pools.insert(singleton_site(ps, i))
    pools.cascade(recycle)
    site = with_complement_unused(pools.best(), n)
    if not site.is_valid(ps):
        raise ContractViolation("internal: engine emitted an invalid site")
    return site, history


def _truncate_to_power_of_two(site: Site) -> tuple[Site, set[int]]:
    rank = site.rank
    if rank < 1:
        raise InputTooSmall("base solver returned an empty log")
    p2 = 1 << (rank.bit_length() - 1)
    if p2 == rank:
        return site, set()
    kept = site.log.batches[:p2]
    dropped: set[int] = set()
    for b in site.log.batches[p2:]:
        dropped.update(b.indices)
    return Site(site.point, Log(kept)), dropped


def buffered_tverberg(
    ps: PointSet,
    delta: Fraction,
    base_solver: Callable[[PointSet], Site],
) -> tuple[Site, HistoryStats]:
    """Merge engine with a buffer of free points and a pluggable base solver.

    While the buffer holds at least delta*n points the base solver runs on
    the buffered subset; its site is truncated to the largest power-of-two
    rank and inserted into the pools.  Merges recycle indices back into the
    buffer.  Stops when nothing can merge and the buffer is small; the
    output rank is at least (1-delta) * n / (2 (d+1)^2) whenever the base
    solver can always consume a buffer of size >= delta*n.

    A base solver may raise :class:`InputTooSmall` to signal that the
    current buffer is below its minimum working size; the engine then stops
    extracting (the remaining buffer counts as free points).  Base results
    failing exact verification abort with :class:`ContractViolation`.
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise PreconditionError("delta must be in (0,1)")
    n = ps.n
    threshold = delta * n
    history = HistoryStats()
    pools = _Pools(ps, history)
    buffer: set[int] = set(range(n))

    def recycle(indices: set[int]) -> None:
        buffer.update(indices)

    while len(buffer) >= threshold:
        ordered = sorted(buffer)
        sub = ps.subset(ordered)
        try:
            raw = base_solver(sub)
        except InputTooSmall:
            break
        if not raw.is_valid(sub):
            raise ContractViolation("base solver returned an invalid site")
        remapped = _remap_site(raw, ordered)
        site, dropped = _truncate_to_power_of_two(remapped)
        captive = site.log.all_indices()
        buffer -= captive
        pools.insert(site)
        pools.cascade(recycle)
    if not pools.by_rank:
        raise InputTooSmall("base solver never produced a site")
    site = with_complement_unused(pools.best(), n)
    if not site.is_valid(ps):
        raise ContractViolation("internal: engine emitted an invalid site")
    return site, history


def _remap_site(site: Site, index_map: list[int]) -> Site:
    """Translate a site over a subset PointSet back to parent indices."""
    batches = []
    for b in site.log.batches:
        weights = {index_map[i]: w for i, w in b.witness.weights.items()}
        comb = ConvexCombination(weights, b.witness.target)
        batches.append(Batch(tuple(index_map[i] for i in b.indices), comb))
    return Site(site.point, Log(tuple(batches)))

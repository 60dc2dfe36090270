"""Certified Tverberg points and partitions in exact rational arithmetic.

Core objects: :class:`~tverberg.geometry.PointSet` (the indexed universe),
:class:`~tverberg.sites.Site` (a point plus a log of disjoint witnessed
batches), and verification via :func:`~tverberg.verify.verify_site`.
Partition algorithms range from the desk-scale exact solver to planar,
projection-based, merge-and-recycle, randomized, and sampling-based
approximations; every emitted certificate re-verifies exactly.
"""

from .convex import (
    ConvexCombination,
    HullInside,
    HullOutside,
    RadonResult,
    SeparationWitness,
    common_point,
    hull_membership,
    radon_partition,
    sparsify,
)
from .errors import (
    ContractViolation,
    GeneralPositionViolation,
    InputTooSmall,
    ParseError,
    PreconditionError,
    ScaleCapExceeded,
    SearchFailure,
    TverbergError,
)
from .exact import BallState, exact_tverberg, exchange_step, min_ball_over_hulls
from .geometry import (
    Point,
    PointSet,
    Simplex,
    dist_point_simplex,
    orientation,
    point_in_simplex,
    pt,
    solve_linear,
)
from .lowdim import ExtractParams, extract_tverberg
from .lp import LinearSystem, LpFeasible, LpInfeasible, lp_feasible
from .planar import (
    Halfplane,
    PlanarDepthResult,
    birch_partition,
    centerpoint_2d,
    deep_log_2d,
    shallow_log_2d,
    tukey_depth_2d,
    tverberg_log_2d,
)
from .projection import project_tverberg
from .random_partition import (
    ColoringParams,
    iterated_radon_centerpoint,
    net_size,
    random_coloring_partition,
    random_partition_with_certificate,
    random_partition_with_point,
)
from .rng import RNG_NAME, SplitMix64, derive_seed
from .sites import (
    Batch,
    HistoryStats,
    Log,
    Site,
    buffered_tverberg,
    merge_sites,
    miller_sheehy,
)
from .verify import VerifyReport, brute_tukey_depth, brute_tverberg_depth, verify_site

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

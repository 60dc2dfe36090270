"""Command-line surface.

Subcommands: depth (Tukey + small-scale Tverberg depth), partition
(algorithm dispatch + certificate emission), verify (exact re-check of a
certificate), bench (seeded table generation).

Exit codes: 0 ok, 1 invalid certificate, 2 parse error, 3 precondition or
scale-cap violation, 4 internal failure.  TVK_SEED supplies the default
seed.  Bench rows are sorted and the milliseconds column is zeroed unless
--times is given, so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io as tvio
from .convex import HullInside, hull_membership
from .errors import (
    ContractViolation,
    GeneralPositionViolation,
    ParseError,
    PreconditionError,
    SearchFailure,
    TverbergError,
)
from .exact import exact_tverberg
from .families import FAMILIES, generate
from .geometry import Point, PointSet
from .lowdim import extract_tverberg
from .planar import birch_partition, tukey_depth_2d
from .projection import project_tverberg, rank_bound as projection_bound
from .random_partition import (
    net_size,
    random_partition_with_certificate,
    random_partition_with_point,
)
from .sites import Site, miller_sheehy, buffered_tverberg
from .verify import brute_tverberg_depth, verify_site

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4

ALGOS = ("exact", "birch", "project", "ms", "buffered", "random", "random-lp", "lowdim")


def _default_seed() -> int:
    return int(os.environ.get("TVK_SEED", "0"))


def _parse_point(text: str) -> Point:
    return Point(tuple(tvio.parse_rational(tok) for tok in text.split(",")))


def _bound_for(algo: str, d: int, n: int, delta: Fraction) -> int:
    if algo == "exact":
        return -(-n // (d + 1))
    if algo == "birch":
        return n // 3
    if algo == "project":
        return projection_bound(d, n)
    if algo == "ms":
        if n >= 8 * d * (d + 1) ** 2:
            return -(-n // (2 * (d + 1) ** 2))
        return 1
    if algo == "buffered":
        return -(-int((1 - delta) * n) // (2 * (d + 1) ** 2))
    if algo == "random":
        return n // net_size(d, Fraction(1, 2 * d * d))
    if algo == "random-lp":
        return n // net_size(d, Fraction(1, d + 1))
    if algo == "lowdim":
        return int((1 - delta) * n) // (d * (d + 1))
    raise PreconditionError(f"unknown algorithm {algo!r}")


def _run_algo(algo: str, ps: PointSet, seed: int, delta: Fraction, base: str):
    """Returns ("site", Site) or ("partition", (point, classes, unused))."""
    if algo == "exact":
        return "site", exact_tverberg(ps)
    if algo == "birch":
        return "site", birch_partition(ps)
    if algo == "project":
        return "site", project_tverberg(ps)
    if algo == "ms":
        return "site", miller_sheehy(ps)[0]
    if algo == "buffered":
        if base == "project":
            solver = project_tverberg
        elif base == "random-lp":
            solver = lambda sub: random_partition_with_certificate(sub, seed)
        else:
            raise PreconditionError(f"unknown base solver {base!r}")
        return "site", buffered_tverberg(ps, delta, solver)[0]
    if algo == "random":
        q, classes = random_partition_with_point(ps, seed)
        used = {i for c in classes for i in c}
        unused = [i for i in range(ps.n) if i not in used]
        return "partition", (q, classes, unused)
    if algo == "random-lp":
        return "site", random_partition_with_certificate(ps, seed)
    if algo == "lowdim":
        return "site", extract_tverberg(ps, delta, seed)
    raise PreconditionError(f"unknown algorithm {algo!r}")


def _verify_cert_dict(data: dict, ps: PointSet) -> list[str]:
    """Exact verification of a parsed certificate; returns violations."""
    if int(data.get("n", ps.n)) != ps.n or int(data.get("dim", ps.dim)) != ps.dim:
        return ["certificate was issued for a different point set"]
    if data["kind"] == "site":
        site = tvio.site_from_dict(data)
        return list(verify_site(ps, site).violations)
    point = Point(tuple(tvio.parse_rational(str(c)) for c in data["point"]))
    violations = []
    seen: set[int] = set()
    for k, cls in enumerate(data["classes"]):
        idx = [int(i) for i in cls]
        for i in idx:
            if not 0 <= i < ps.n:
                violations.append(f"class {k}: index {i} out of range")
            elif i in seen:
                violations.append(f"class {k}: index {i} reused")
            seen.add(i)
        if violations:
            continue
        if not isinstance(hull_membership(point, ps, idx), HullInside):
            violations.append(f"class {k}: point not inside the class hull")
    return violations


def cmd_depth(args) -> int:
    ps = tvio.load_points(args.input)
    q = _parse_point(args.point)
    if ps.dim != 2 or q.dim != 2:
        raise PreconditionError("depth command supports d=2 inputs")
    result = tukey_depth_2d(ps, q)
    print(f"tukey={result.depth}")
    if ps.n <= 12:
        print(f"tverberg={brute_tverberg_depth(ps, q)}")
    return EXIT_OK


def cmd_partition(args) -> int:
    ps = tvio.load_points(args.input)
    seed = args.seed if args.seed is not None else _default_seed()
    delta = Fraction(args.delta)
    bound = _bound_for(args.algo, ps.dim, ps.n, delta)
    kind, result = _run_algo(args.algo, ps, seed, delta, args.base)
    meta = dict(algo=args.algo, seed=seed, bound=bound, dim=ps.dim, n=ps.n)
    if kind == "site":
        data = tvio.site_to_dict(result, **meta)
        rank = result.rank
    else:
        q, classes, unused = result
        data = tvio.partition_to_dict(q, classes, unused, **meta)
        rank = len(classes)
    text = tvio.canonical_json(data)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    violations = _verify_cert_dict(tvio.cert_from_json(text), ps)
    print(f"rank={rank} bound={bound}")
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_verify(args) -> int:
    ps = tvio.load_points(args.points)
    data = tvio.cert_from_json(Path(args.cert).read_text())
    violations = _verify_cert_dict(data, ps)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        print("INVALID")
        return EXIT_INVALID
    print(f"VALID rank={data.get('rank')}")
    return EXIT_OK


def cmd_bench(args) -> int:
    ns = [int(tok) for tok in args.n_list.split(",")]
    algos = args.algos.split(",")
    seeds = [int(tok) for tok in args.seeds.split(",")]
    for algo in algos:
        if algo not in ALGOS:
            raise PreconditionError(f"unknown algorithm {algo!r}")
    delta = Fraction(args.delta)
    rows = []
    for n in ns:
        for algo in algos:
            for seed in seeds:
                ps = generate(args.family, args.d, n, seed)
                start = time.perf_counter()
                kind, result = _run_algo(algo, ps, seed, delta, args.base)
                millis = int((time.perf_counter() - start) * 1000) if args.times else 0
                rank = result.rank if kind == "site" else len(result[1])
                bound = _bound_for(algo, args.d, n, delta)
                ratio = f"{rank / bound:.4f}" if bound else ""
                rows.append((args.family, args.d, n, algo, seed, rank, bound, ratio, millis))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3], r[4]))
    lines = ["family,d,n,algo,seed,rank,bound,ratio,millis"]
    lines.extend(",".join(str(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvk", description="Certified Tverberg partitions, exactly."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depth", help="Tukey depth (2D) and desk-scale Tverberg depth")
    p.add_argument("input")
    p.add_argument("--point", required=True, help="query point, e.g. '1/2,1/2'")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("partition", help="compute a partition certificate")
    p.add_argument("input")
    p.add_argument("--algo", required=True, choices=ALGOS)
    p.add_argument("--delta", default="1/4", help="free-point fraction (buffered, lowdim)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--base", default="project", choices=("project", "random-lp"),
                   help="base solver for --algo buffered")
    p.add_argument("--out", default=None, help="certificate output path (default stdout)")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="exactly re-verify a certificate")
    p.add_argument("points")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="seeded rank/bound table")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-list", required=True)
    p.add_argument("--algos", required=True)
    p.add_argument("--seeds", default="0")
    p.add_argument("--delta", default="1/4")
    p.add_argument("--base", default="project", choices=("project", "random-lp"))
    p.add_argument("--times", action="store_true",
                   help="record wall time (breaks byte-reproducibility)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, GeneralPositionViolation) as err:
        print(f"precondition violated: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SearchFailure, ContractViolation, TverbergError) as err:
        print(f"internal failure: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

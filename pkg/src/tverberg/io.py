"""Point files and certificate serialization.

Points: CSV with one point per line (coordinates as "num/den" or decimal
strings, converted exactly), optional leading "dim=d" line; or JSON
{"dim": d, "points": [[...], ...]}.  Certificates: JSON with every
rational rendered as "numerator/denominator", so exactness survives the
round trip.  Serialization is canonical (sorted keys, fixed separators):
identical inputs yield byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .convex import ConvexCombination
from .errors import ParseError
from .geometry import Point, PointSet
from .sites import Batch, Log, Site

CERT_VERSION = 1


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise ParseError(f"bad rational {text!r}: {err}") from None


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def load_points(path: str | Path) -> PointSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return _points_from_json(text)
    rows = []
    dim = None
    for line_no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("dim="):
            try:
                dim = int(line[4:])
            except ValueError:
                raise ParseError(f"line {line_no}: bad dim header") from None
            continue
        coords = [parse_rational(tok) for tok in line.split(",")]
        rows.append(coords)
    if not rows:
        raise ParseError("no points in file")
    if dim is not None and any(len(r) != dim for r in rows):
        raise ParseError("row length disagrees with dim header")
    try:
        return PointSet.from_rows(rows)
    except Exception as err:
        raise ParseError(str(err)) from None


def _points_from_json(text: str) -> PointSet:
    try:
        data = json.loads(text)
        rows = [[parse_rational(str(c)) for c in row] for row in data["points"]]
        ps = PointSet.from_rows(rows)
    except ParseError:
        raise
    except Exception as err:
        raise ParseError(f"bad points JSON: {err}") from None
    if "dim" in data and ps.dim != int(data["dim"]):
        raise ParseError("points disagree with declared dim")
    return ps


def save_points(ps: PointSet, path: str | Path) -> None:
    lines = [f"dim={ps.dim}"]
    for p in ps:
        lines.append(",".join(format_rational(c) for c in p))
    Path(path).write_text("\n".join(lines) + "\n")


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def site_to_dict(site: Site, *, algo: str, seed=None, bound=None, dim: int, n: int) -> dict:
    return {
        "kind": "site",
        "version": CERT_VERSION,
        "algo": algo,
        "seed": seed,
        "dim": dim,
        "n": n,
        "bound": bound,
        "rank": site.rank,
        "point": [format_rational(c) for c in site.point],
        "batches": [
            {
                "indices": list(b.indices),
                "weights": {
                    str(i): format_rational(w) for i, w in sorted(b.witness.weights.items())
                },
            }
            for b in site.log.batches
        ],
        "unused": list(site.unused),
    }


def partition_to_dict(point: Point, classes, unused, *, algo: str, seed=None, bound=None, dim: int, n: int) -> dict:
    return {
        "kind": "partition",
        "version": CERT_VERSION,
        "algo": algo,
        "seed": seed,
        "dim": dim,
        "n": n,
        "bound": bound,
        "rank": len(classes),
        "point": [format_rational(c) for c in point],
        "classes": [list(c) for c in classes],
        "unused": list(unused),
    }


def cert_from_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"bad certificate JSON: {err}") from None
    if not isinstance(data, dict) or data.get("kind") not in ("site", "partition"):
        raise ParseError("certificate must be a JSON object of kind site|partition")
    return data


def site_from_dict(data: dict) -> Site:
    try:
        point = Point(tuple(parse_rational(str(c)) for c in data["point"]))
        batches = []
        for b in data["batches"]:
            weights = {int(i): parse_rational(str(w)) for i, w in b["weights"].items()}
            batches.append(Batch(tuple(int(i) for i in b["indices"]), ConvexCombination(weights, point)))
        unused = tuple(int(i) for i in data.get("unused", []))
    except ParseError:
        raise
    except Exception as err:
        raise ParseError(f"bad site certificate: {err}") from None
    return Site(point, Log(tuple(batches)), unused)

"""JSON (de)serialization of sets and instances.

Numbers are written as ``[num, den]`` pairs; on input ints, decimal or
fraction strings ("1.4", "7/5") and pairs are all accepted.  Floats are
rejected.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .gauge import RcpInstance
from .geom2d import Point2, Polygon, Strip, rat
from .latticefree import AnySet, LatticeFreeSet, body_of, split


class FormatError(ValueError):
    pass


def num(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def point_out(p: Point2) -> list:
    return [num(p.x), num(p.y)]


def _num_in(x) -> Fraction:
    if isinstance(x, float):
        raise FormatError(f"floating point number {x!r} not allowed; use a string like \"7/5\"")
    try:
        return rat(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad number {x!r}: {e}") from None


def point_in(obj) -> Point2:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise FormatError(f"a point is a two-element list, got {obj!r}")
    return Point2(_num_in(obj[0]), _num_in(obj[1]))


def set_to_json(s: AnySet) -> dict[str, Any]:
    body = body_of(s)
    if isinstance(body, Strip):
        n = body.normal
        if n.x.denominator != 1 or n.y.denominator != 1 or body.lo.denominator != 1:
            return {"type": "strip", "normal": point_out(n), "lo": num(body.lo), "hi": num(body.hi)}
        return {"type": "split", "a": int(n.x), "b": int(n.y), "c": int(body.lo)}
    return {"type": "polygon", "vertices": [point_out(v) for v in body.vertices]}


def set_from_json(obj) -> Polygon | Strip:
    if not isinstance(obj, dict):
        raise FormatError("a set must be a JSON object")
    kind = obj.get("type", "polygon")
    try:
        if kind == "polygon":
            return Polygon(tuple(point_in(v) for v in obj["vertices"]))
        if kind == "split":
            return split(int(obj["a"]), int(obj["b"]), int(obj["c"]))
        if kind == "strip":
            return Strip.from_bounds(point_in(obj["normal"]), _num_in(obj["lo"]), _num_in(obj["hi"]))
    except KeyError as e:
        raise FormatError(f"missing field {e}") from None
    raise FormatError(f"unknown set type {kind!r}")


def instance_to_json(inst: RcpInstance) -> dict[str, Any]:
    return {"f": point_out(inst.f), "rays": [point_out(r) for r in inst.rays]}


def instance_from_json(obj) -> RcpInstance:
    if not isinstance(obj, dict) or "f" not in obj or "rays" not in obj:
        raise FormatError("an instance needs 'f' and 'rays'")
    return RcpInstance(point_in(obj["f"]), tuple(point_in(r) for r in obj["rays"]))


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: malformed JSON ({e})") from None


def dumps(obj) -> str:
    """Stable JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def lattice_free_to_json(s: LatticeFreeSet) -> dict[str, Any]:
    out = set_to_json(s)
    out["classification"] = s.classification.value
    return out

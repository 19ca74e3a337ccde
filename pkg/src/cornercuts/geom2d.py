"""Exact planar geometry over the rationals.

Everything here works on :class:`fractions.Fraction`; there is no epsilon
anywhere.  Interior/boundary questions are answered by the sign of exact
halfplane slacks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

Rat = Fraction

RatLike = Union[int, Fraction, str, tuple]


class GeometryError(ValueError):
    """Bad geometric input (degenerate line, collinear polygon, ...)."""


class NotInteriorError(GeometryError):
    """A point that must lie strictly inside a body does not."""


class SingularBasisError(GeometryError):
    pass


class UnboundedBodyError(GeometryError):
    pass


def rat(x: RatLike) -> Fraction:
    """Coerce ``x`` to an exact Fraction.

    Accepts ints, Fractions, decimal/fraction strings ("1.4", "7/5") and
    ``(num, den)`` pairs.  Floats are refused: they would smuggle binary
    rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot make an exact rational from {x!r}")


@dataclass(frozen=True, order=True, slots=True)
class Point2:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point2:
        return Point2(-self.x, -self.y)

    def __mul__(self, c) -> Point2:
        c = rat(c)
        return Point2(self.x * c, self.y * c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Point2:
        c = rat(c)
        return Point2(self.x / c, self.y / c)

    def dot(self, other: Point2) -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> Fraction:
        return self.x * other.y - self.y * other.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def swapped(self) -> Point2:
        return Point2(self.y, self.x)

    def __repr__(self):
        return f"Point2({self.x}, {self.y})"


def pt(x: RatLike, y: RatLike) -> Point2:
    return Point2(rat(x), rat(y))


ORIGIN = Point2(Fraction(0), Fraction(0))


def orientation(o: Point2, a: Point2, b: Point2) -> Fraction:
    """Twice the signed area of triangle (o, a, b); > 0 for a left turn."""
    return (a - o).cross(b - o)


@dataclass(frozen=True, slots=True)
class HalfPlane:
    """The closed halfplane ``a . x <= b`` (``a`` is the outward normal)."""

    a: Point2
    b: Fraction

    def __post_init__(self):
        if self.a.is_zero():
            raise GeometryError("halfplane normal must be nonzero")
        object.__setattr__(self, "b", rat(self.b))

    def slack(self, p: Point2) -> Fraction:
        return self.b - self.a.dot(p)

    def contains(self, p: Point2, strict: bool = False) -> bool:
        s = self.slack(p)
        return s > 0 if strict else s >= 0

    def swapped(self) -> HalfPlane:
        return HalfPlane(self.a.swapped(), self.b)


class _Body:
    """Shared membership predicates for bodies given by halfplanes."""

    __slots__ = ()

    def halfplanes(self) -> tuple[HalfPlane, ...]:
        raise NotImplementedError

    def contains_interior(self, p: Point2) -> bool:
        return all(h.slack(p) > 0 for h in self.halfplanes())

    def contains_closed(self, p: Point2) -> bool:
        return all(h.slack(p) >= 0 for h in self.halfplanes())

    def on_boundary(self, p: Point2) -> bool:
        slacks = [h.slack(p) for h in self.halfplanes()]
        return min(slacks) == 0

    def member(self, p: Point2, mode: str) -> bool:
        if mode == "interior":
            return self.contains_interior(p)
        if mode == "boundary":
            return self.on_boundary(p)
        if mode == "closed":
            return self.contains_closed(p)
        raise ValueError(f"unknown closure mode {mode!r}")


@dataclass(frozen=True, slots=True)
class Polygon(_Body):
    """A bounded, strictly convex polygon with 3 or 4 vertices.

    Vertices are stored counter-clockwise; a clockwise input is reversed
    (keeping the first vertex first).  Collinear triples are rejected.
    """

    vertices: tuple[Point2, ...]
    _planes: tuple[HalfPlane, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(v if isinstance(v, Point2) else Point2(*v) for v in self.vertices)
        if not 3 <= len(vs) <= 4:
            raise GeometryError(f"polygon needs 3 or 4 vertices, got {len(vs)}")
        if len(set(vs)) != len(vs):
            raise GeometryError("repeated polygon vertex")
        turns = [orientation(vs[i], vs[(i + 1) % len(vs)], vs[(i + 2) % len(vs)])
                 for i in range(len(vs))]
        if any(t == 0 for t in turns):
            raise GeometryError("collinear polygon vertices")
        if all(t < 0 for t in turns):
            vs = (vs[0],) + tuple(reversed(vs[1:]))
        elif not all(t > 0 for t in turns):
            raise GeometryError("polygon is not convex")
        object.__setattr__(self, "vertices", vs)
        planes = []
        for p, q in self.edges():
            d = q - p
            normal = Point2(d.y, -d.x)
            planes.append(HalfPlane(normal, normal.dot(p)))
        object.__setattr__(self, "_planes", tuple(planes))

    def edges(self) -> list[tuple[Point2, Point2]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def halfplanes(self) -> tuple[HalfPlane, ...]:
        return self._planes

    def vertex_set(self) -> frozenset[Point2]:
        return frozenset(self.vertices)

    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def map(self, fn) -> Polygon:
        return Polygon(tuple(fn(v) for v in self.vertices))


@dataclass(frozen=True, slots=True)
class Strip(_Body):
    """The set ``lo <= normal . x <= hi``, held as two opposite halfplanes."""

    upper: HalfPlane
    lower: HalfPlane

    def __post_init__(self):
        if self.upper.a != -self.lower.a:
            raise GeometryError("strip halfplanes must have opposite normals")
        if -self.lower.b >= self.upper.b:
            raise GeometryError("strip has empty interior")

    @classmethod
    def from_bounds(cls, normal: Point2, lo: RatLike, hi: RatLike) -> Strip:
        return cls(HalfPlane(normal, rat(hi)), HalfPlane(-normal, -rat(lo)))

    @property
    def normal(self) -> Point2:
        return self.upper.a

    @property
    def lo(self) -> Fraction:
        return -self.lower.b

    @property
    def hi(self) -> Fraction:
        return self.upper.b

    def halfplanes(self) -> tuple[HalfPlane, ...]:
        return (self.upper, self.lower)

    def map_swap(self) -> Strip:
        return Strip(self.upper.swapped(), self.lower.swapped())


ConvexBody2 = Union[Polygon, Strip]


def line_intersect(l1: Sequence[Point2], l2: Sequence[Point2]) -> Optional[Point2]:
    """Intersect two lines, each given by two distinct points.

    Returns None for parallel (including coincident) lines.
    """
    p, q = l1
    r, s = l2
    if p == q or r == s:
        raise GeometryError("a line needs two distinct points")
    d1, d2 = q - p, s - r
    denom = d1.cross(d2)
    if denom == 0:
        return None
    t = (r - p).cross(d2) / denom
    return p + d1 * t


def lattice_points_in(body: ConvexBody2, closure_mode: str = "closed") -> list[Point2]:
    """Enumerate lattice points of a bounded body, sorted lexicographically."""
    if isinstance(body, Strip):
        raise UnboundedBodyError("strips hold infinitely many lattice points; "
                                 "use lattice_points_on_strip with a window")
    xmin, xmax, ymin, ymax = body.bounding_box()
    out = []
    for x in range(math.floor(xmin), math.ceil(xmax) + 1):
        for y in range(math.floor(ymin), math.ceil(ymax) + 1):
            p = Point2(Fraction(x), Fraction(y))
            if body.member(p, closure_mode):
                out.append(p)
    return out


def lattice_points_on_strip(strip: Strip, window: tuple[int, int, int, int]) -> list[Point2]:
    """Lattice points on the two boundary lines of ``strip`` inside a box.

    ``window`` is ``(xmin, xmax, ymin, ymax)`` with integer bounds.
    """
    xmin, xmax, ymin, ymax = window
    out = []
    for x in range(xmin, xmax + 1):
        for y in range(ymin, ymax + 1):
            p = Point2(Fraction(x), Fraction(y))
            if strip.on_boundary(p):
                out.append(p)
    return out


def lattice_points_on_segment(p: Point2, q: Point2, relative_interior: bool = True) -> list[Point2]:
    """Lattice points on segment [p, q] (optionally excluding the endpoints)."""
    d = q - p
    xmin, xmax = sorted((p.x, q.x))
    ymin, ymax = sorted((p.y, q.y))
    out = []
    for x in range(math.ceil(xmin), math.floor(xmax) + 1):
        for y in range(math.ceil(ymin), math.floor(ymax) + 1):
            c = Point2(Fraction(x), Fraction(y))
            if (c - p).cross(d) != 0:
                continue
            if relative_interior and (c == p or c == q):
                continue
            out.append(c)
    return out


def ray_boundary_scale(body: ConvexBody2, f: Point2, r: Point2) -> Optional[Fraction]:
    """Scale ``lam > 0`` at which ``f + lam * r`` leaves ``body``.

    None when ``r`` is a recession direction of the body.
    """
    if r.is_zero():
        raise GeometryError("ray must be nonzero")
    if not body.contains_interior(f):
        raise NotInteriorError(f"{f} is not interior to the body")
    best = None
    for h in body.halfplanes():
        rate = h.a.dot(r)
        if rate > 0:
            lam = h.slack(f) / rate
            if best is None or lam < best:
                best = lam
    return best


def coords_in_ray_basis(p: Point2, f: Point2, r_a: Point2, r_b: Point2) -> tuple[Fraction, Fraction]:
    """Solve ``p - f = la * r_a + lb * r_b`` exactly."""
    det = r_a.cross(r_b)
    if det == 0:
        raise SingularBasisError("rays are parallel")
    d = p - f
    return d.cross(r_b) / det, r_a.cross(d) / det


def convex_hull_vertices(points: Iterable[Point2]) -> list[Point2]:
    """Counter-clockwise hull (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: list[Point2] = []
        for p in seq:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def halfplane_polygon_vertices(planes: Sequence[HalfPlane]) -> list[Point2]:
    """Vertices of the bounded region cut out by ``planes`` (possibly empty).

    Brute force over pairs of boundary lines; fine for the handful of
    planes used here.
    """
    cands = []
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            a1, a2 = planes[i].a, planes[j].a
            det = a1.cross(a2)
            if det == 0:
                continue
            b1, b2 = planes[i].b, planes[j].b
            p = Point2((b1 * a2.y - b2 * a1.y) / det, (a1.x * b2 - a2.x * b1) / det)
            if all(h.slack(p) >= 0 for h in planes):
                cands.append(p)
    return convex_hull_vertices(cands)

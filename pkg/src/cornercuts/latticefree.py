"""Maximal lattice-free sets in the plane: checking, classifying, families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .geom2d import (
    ConvexBody2,
    Point2,
    Polygon,
    Strip,
    lattice_points_in,
    lattice_points_on_segment,
    line_intersect,
    pt,
    rat,
)


class Classification(str, Enum):
    SPLIT = "split"
    TRIANGLE1 = "triangle-type-1"
    TRIANGLE2 = "triangle-type-2"
    TRIANGLE3 = "triangle-type-3"
    QUADRILATERAL = "quadrilateral"

    def __str__(self):
        return self.value


class ClassificationError(ValueError):
    pass


HALF = Fraction(1, 2)
CENTER = Point2(HALF, HALF)


def _split_is_maximal(strip: Strip) -> bool:
    n = strip.normal
    if n.x.denominator != 1 or n.y.denominator != 1:
        return False
    if math.gcd(int(n.x), int(n.y)) != 1:
        return False
    return strip.lo.denominator == 1 and strip.hi - strip.lo == 1


def edge_interior_lattice_points(poly: Polygon) -> list[list[Point2]]:
    return [lattice_points_on_segment(p, q) for p, q in poly.edges()]


def is_maximal_lattice_free(body: ConvexBody2) -> bool:
    """No lattice point inside, and a lattice point inside every edge."""
    if isinstance(body, Strip):
        return _split_is_maximal(body)
    if lattice_points_in(body, "interior"):
        return False
    return all(edge_interior_lattice_points(body))


def classify(body: ConvexBody2) -> Classification:
    if not is_maximal_lattice_free(body):
        raise ClassificationError("body is not maximal lattice-free")
    if isinstance(body, Strip):
        return Classification.SPLIT
    if len(body.vertices) == 4:
        return Classification.QUADRILATERAL
    on_boundary = lattice_points_in(body, "boundary")
    per_edge = edge_interior_lattice_points(body)
    if all(v.is_integral() for v in body.vertices) and all(len(e) == 1 for e in per_edge):
        return Classification.TRIANGLE1
    if len(on_boundary) == 3:
        return Classification.TRIANGLE3
    return Classification.TRIANGLE2


@dataclass(frozen=True)
class LatticeFreeSet:
    body: ConvexBody2
    classification: Classification

    @classmethod
    def of(cls, body: ConvexBody2) -> LatticeFreeSet:
        """Validate ``body`` and attach its classification."""
        return cls(body, classify(body))

    @property
    def vertices(self) -> tuple[Point2, ...]:
        if isinstance(self.body, Strip):
            return ()
        return self.body.vertices


def split(a: int, b: int, c: int) -> Strip:
    """The split ``c <= a x1 + b x2 <= c + 1``."""
    return Strip.from_bounds(pt(a, b), c, c + 1)


def reflect_about_diagonal(s: LatticeFreeSet) -> LatticeFreeSet:
    """Swap coordinates; the mirror image keeps its type."""
    if isinstance(s.body, Strip):
        body = s.body.map_swap()
    else:
        body = s.body.map(Point2.swapped)
    return LatticeFreeSet(body, s.classification)


# --- family of Type-3 triangles --------------------------------------------


@dataclass(frozen=True)
class SlopeParams:
    """Edge slopes of a Type-3 triangle: -u through (1,0), -v through the
    origin, w through (0,1)."""

    u: Fraction
    v: Fraction
    w: Fraction

    def __post_init__(self):
        for name in ("u", "v", "w"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if not (self.u > 1 and 0 < self.v < 1 and self.w > 0):
            raise ValueError(f"need u > 1, 0 < v < 1, w > 0; got {self.astuple()}")

    @classmethod
    def from_family(cls, t1, t2, t3) -> SlopeParams:
        """Map the three-line parametrization (t1, t2, t3) onto slopes."""
        return cls(rat(t3), rat(t2), 1 / rat(t1))

    def astuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.u, self.v, self.w)


def family_lines(p: SlopeParams) -> dict[str, tuple[Point2, Point2]]:
    """Edge lines as point pairs, keyed by the lattice point they carry."""
    one, zero = Fraction(1), Fraction(0)
    return {
        "origin": (Point2(zero, zero), Point2(one, -p.v)),
        "e1": (Point2(one, zero), Point2(zero, p.u)),
        "e2": (Point2(zero, one), Point2(one, one + p.w)),
    }


@dataclass(frozen=True)
class FamilyTriangle:
    params: SlopeParams
    # (alpha, beta), (gamma, delta), (-eps, zeta) in the usual labelling
    v_e1_origin: Point2
    v_e1_e2: Point2
    v_e2_origin: Point2
    is_lattice_free: bool

    @property
    def body(self) -> Polygon:
        return Polygon((self.v_e1_origin, self.v_e1_e2, self.v_e2_origin))

    def lattice_free_set(self) -> LatticeFreeSet:
        if not self.is_lattice_free:
            raise ClassificationError(f"{self.params} does not give a maximal lattice-free triangle")
        return LatticeFreeSet(self.body, Classification.TRIANGLE3)


def family_f_triangle(p: SlopeParams) -> FamilyTriangle:
    """Build the triangle by intersecting its three edge lines.

    The flag records whether it is genuinely maximal lattice-free with
    exactly the three lattice points (0,0), (1,0), (0,1) on its boundary.
    """
    lines = family_lines(p)
    a = line_intersect(lines["e1"], lines["origin"])
    g = line_intersect(lines["e1"], lines["e2"])
    e = line_intersect(lines["e2"], lines["origin"])
    poly = Polygon((a, g, e))
    ok = is_maximal_lattice_free(poly) and classify(poly) is Classification.TRIANGLE3
    return FamilyTriangle(p, a, g, e, ok)


# --- symmetric quadrilaterals around (1/2, 1/2) -----------------------------


@dataclass(frozen=True)
class SubclassGQuad:
    """Quadrilateral with vertices (1+a,1-b), (1-b,-a), (-a,b), (b,1+a)
    where (a, b) = (t/(1+t^2), 1/(1+t^2)) lies on a^2 = b(1-b)."""

    t: Fraction
    a: Fraction
    b: Fraction
    vertices: tuple[Point2, Point2, Point2, Point2]
    f: Point2 = CENTER

    @property
    def body(self) -> Polygon:
        return Polygon(self.vertices)

    @property
    def rays(self) -> tuple[Point2, ...]:
        """Corner rays r1..r4 (vertex minus f), in vertex order."""
        return tuple(v - self.f for v in self.vertices)

    def lattice_free_set(self) -> LatticeFreeSet:
        return LatticeFreeSet(self.body, Classification.QUADRILATERAL)


def subclass_g_quad(t) -> SubclassGQuad:
    t = rat(t)
    if t <= 0:
        raise ValueError("t must be positive")
    a = t / (1 + t * t)
    b = 1 / (1 + t * t)
    one = Fraction(1)
    vs = (Point2(one + a, one - b), Point2(one - b, -a), Point2(-a, b), Point2(b, one + a))
    return SubclassGQuad(t, a, b, vs)


def rotate_quarter(p: Point2) -> Point2:
    """Rotate by 90 degrees about (1/2, 1/2)."""
    return Point2(1 - p.y, p.x)


AnySet = Union[LatticeFreeSet, ConvexBody2]


def body_of(s: AnySet) -> ConvexBody2:
    return s.body if isinstance(s, LatticeFreeSet) else s


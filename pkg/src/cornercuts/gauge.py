"""Gauge functions of lattice-free sets and the intersection cuts they give.

For a set B with f in its interior, ``psi(B, f, r)`` is ``1/lam`` where
``f + lam*r`` is the exit point of the ray, and 0 along recession
directions.  The cut for an instance ``x = f + sum r_j s_j`` is
``sum psi(r_j) s_j >= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geom2d import GeometryError, NotInteriorError, Point2, ray_boundary_scale
from .latticefree import AnySet, body_of
from .lp import LpSolution, SmallLP, solve_min


class ReductionError(ValueError):
    """A ray slated for removal is not a convex combination of two corners."""


@dataclass(frozen=True)
class RcpInstance:
    f: Point2
    rays: tuple[Point2, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))
        if self.f.is_integral():
            raise ValueError("f must not be a lattice point")
        if not self.rays:
            raise ValueError("need at least one ray")
        if any(r.is_zero() for r in self.rays):
            raise ValueError("rays must be nonzero")

    @property
    def k(self) -> int:
        return len(self.rays)


@dataclass(frozen=True)
class CutInequality:
    coeffs: tuple[Fraction, ...]
    rhs: Fraction = Fraction(1)

    def lhs(self, s: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, s)), Fraction(0))

    def satisfied_by(self, s: Sequence[Fraction]) -> bool:
        return self.lhs(s) >= self.rhs


def psi(s: AnySet, f: Point2, r: Point2) -> Fraction:
    lam = ray_boundary_scale(body_of(s), f, r)
    return Fraction(0) if lam is None else 1 / lam


def cut(s: AnySet, instance: RcpInstance) -> CutInequality:
    body = body_of(s)
    if not body.contains_interior(instance.f):
        raise NotInteriorError(f"f = {instance.f} is not interior to the set")
    return CutInequality(tuple(psi(body, instance.f, r) for r in instance.rays))


def normalize_rays(s: AnySet, instance: RcpInstance) -> RcpInstance:
    """Rescale every bounded-direction ray so that f + r hits the boundary."""
    out = []
    for r in instance.rays:
        g = psi(s, instance.f, r)
        out.append(r if g == 0 else r / g)
    return RcpInstance(instance.f, tuple(out))


@dataclass(frozen=True)
class ReductionStep:
    dropped: int
    corner_a: int
    corner_b: int
    lam: Fraction  # r_dropped = lam * r_a + (1 - lam) * r_b


def _convex_weight(r: Point2, ra: Point2, rb: Point2):
    """lam in [0, 1] with r = lam*ra + (1-lam)*rb, or None."""
    d = ra - rb
    e = r - rb
    if d.is_zero():
        return Fraction(1) if e.is_zero() else None
    if d.cross(e) != 0:
        return None
    lam = d.dot(e) / d.dot(d)
    return lam if 0 <= lam <= 1 else None


def corner_ray_reduce(instance: RcpInstance, corner_indices: Iterable[int]):
    """Keep only the corner rays, certifying every dropped ray.

    Returns ``(reduced_instance, steps)`` where each step records the pair
    of corner rays and the weight that reproduce the dropped ray exactly.
    """
    corners = sorted(set(corner_indices))
    if not corners or corners[0] < 0 or corners[-1] >= instance.k:
        raise ValueError("corner indices out of range")
    cset = set(corners)
    steps = []
    for j, r in enumerate(instance.rays):
        if j in cset:
            continue
        found = None
        for ia in corners:
            for ib in corners:
                if ib < ia:
                    continue
                lam = _convex_weight(r, instance.rays[ia], instance.rays[ib])
                if lam is not None:
                    found = ReductionStep(j, ia, ib, lam)
                    break
            if found:
                break
        if found is None:
            raise ReductionError(f"ray {j} = {r} is not a convex combination of two corner rays")
        steps.append(found)
    reduced = RcpInstance(instance.f, tuple(instance.rays[i] for i in corners))
    return reduced, steps


def closure_lp(sets: Sequence[AnySet], instance: RcpInstance) -> SmallLP:
    """``min sum s`` over the cuts of ``sets`` (all must contain f inside)."""
    if not sets:
        raise GeometryError("need at least one set")
    # all-zero cuts (every ray a recession direction) are dropped as vacuous
    rows = [c for c in (cut(s, instance).coeffs for s in sets) if any(c)]
    if not rows:
        return SmallLP(tuple(Fraction(1) for _ in instance.rays), ())
    return SmallLP.covering(rows)


def closure_min(sets: Sequence[AnySet], instance: RcpInstance) -> LpSolution:
    return solve_min(closure_lp(sets, instance))

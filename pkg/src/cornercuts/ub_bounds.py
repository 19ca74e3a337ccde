"""Upper bound on how well triangles approximate the quadrilateral closure.

A Type-3 triangle with edge slopes (u, v, w) is relaxed by three Type-2
triangles T1, T2, T3, each keeping two of its edges and closing the third
side with a lattice line (x1 = 1, x2 = 1, x1 + x2 = 0).  For f inside all
three, the LP ``min s1+s2+s3`` over the three cuts has the closed form
``1 - 1/(1 + 1/a + 1/b + 1/c)`` and ``1/a + 1/b + 1/c`` is linear in f:

    (1-f1)(u/v - 1) + (1-f2)(u+w)/(w(u-1)) + (f1+f2)(v+w)/(1-v)

Sweeps below minimize that sum (the "slope sum") over the region Q and a
two-triangle relaxation value over the remaining positions of f, then turn
the worse of the two into a Goemans ratio.
"""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .gauge import RcpInstance, closure_lp, psi
from .geom2d import NotInteriorError, Point2, Polygon, line_intersect, pt, rat
from .grid import Axis, GridRow, frange, grid_search
from .latticefree import FamilyTriangle, SlopeParams, family_f_triangle, family_lines
from .lp import LpStatus, SmallLP, dual_closed_form_2, dual_closed_form_3, solve_min


class ContractError(ValueError):
    """A scene does not meet the precondition of the requested quantity."""


class CrossCheckError(AssertionError):
    """Two independent evaluations of the same quantity disagree."""


# --- closed forms in the slopes --------------------------------------------


def closed_form_vertices(p: SlopeParams) -> dict[str, Fraction]:
    u, v, w = p.astuple()
    alpha = u / (u - v)
    return {
        "alpha": alpha,
        "beta": -v * alpha,
        "gamma": (u - 1) / (u + w),
        "delta": u * (w + 1) / (u + w),
        "eps": 1 / (v + w),
        "zeta": v / (v + w),
    }


def theta(p: SlopeParams, f: Point2) -> Fraction:
    """x2-coordinate of the exit point (-theta, theta) of r3 on x1 + x2 = 0."""
    u, v, w = p.astuple()
    return (f.x * v + f.y) / ((f.x + f.y) * (v + w) + (1 - v))


def slope_terms(p: SlopeParams) -> tuple[Fraction, Fraction, Fraction]:
    """(A, B, C) with 1/a = (1-f1)A, 1/b = (1-f2)B, 1/c = (f1+f2)C."""
    u, v, w = p.astuple()
    return u / v - 1, (u + w) / (w * (u - 1)), (v + w) / (1 - v)


def slope_identity_rhs(p: SlopeParams, f: Point2) -> Fraction:
    A, B, C = slope_terms(p)
    return (1 - f.x) * A + (1 - f.y) * B + (f.x + f.y) * C


# --- scenes ----------------------------------------------------------------


@dataclass(frozen=True)
class Type3Scene:
    params: SlopeParams
    triangle: FamilyTriangle
    f: Point2

    @property
    def v1(self) -> Point2:
        """(alpha, beta): edges through (1,0) and (0,0)."""
        return self.triangle.v_e1_origin

    @property
    def v2(self) -> Point2:
        """(gamma, delta): edges through (1,0) and (0,1)."""
        return self.triangle.v_e1_e2

    @property
    def v3(self) -> Point2:
        """(-eps, zeta): edges through (0,1) and (0,0)."""
        return self.triangle.v_e2_origin

    @property
    def rays(self) -> tuple[Point2, Point2, Point2]:
        return (self.v1 - self.f, self.v2 - self.f, self.v3 - self.f)

    @property
    def instance(self) -> RcpInstance:
        return RcpInstance(self.f, self.rays)


def build_scene(p: SlopeParams, f) -> Type3Scene:
    """Construct the triangle geometrically and check it against the closed forms."""
    f = f if isinstance(f, Point2) else pt(*f)
    tri = family_f_triangle(p)
    cf = closed_form_vertices(p)
    got = (tri.v_e1_origin, tri.v_e1_e2, tri.v_e2_origin)
    want = (pt(cf["alpha"], cf["beta"]), pt(cf["gamma"], cf["delta"]), pt(-cf["eps"], cf["zeta"]))
    if got != want:
        raise CrossCheckError(f"vertex closed forms disagree with line intersections: {got} vs {want}")
    if not tri.body.contains_interior(f):
        raise NotInteriorError(f"f = {f} is not interior to the triangle of {p.astuple()}")
    return Type3Scene(p, tri, f)


_X1_EQ_1 = (pt(1, 0), pt(1, 1))
_X2_EQ_1 = (pt(0, 1), pt(1, 1))
_ANTI_DIAG = (pt(0, 0), pt(1, -1))


@dataclass(frozen=True)
class RelaxationTriangles:
    t1: Polygon  # edges through (0,0) and (0,1), closed by x1 = 1
    t2: Polygon  # edges through (0,0) and (1,0), closed by x2 = 1
    t3: Polygon  # edges through (0,1) and (1,0), closed by x1 + x2 = 0
    contains: tuple[bool, bool, bool]  # f strictly inside T_i

    @property
    def bodies(self) -> tuple[Polygon, Polygon, Polygon]:
        return (self.t1, self.t2, self.t3)


def relaxation_triangles(scene: Type3Scene) -> RelaxationTriangles:
    L = family_lines(scene.params)
    t1 = Polygon((scene.v3, line_intersect(L["origin"], _X1_EQ_1), line_intersect(L["e2"], _X1_EQ_1)))
    t2 = Polygon((scene.v1, line_intersect(L["origin"], _X2_EQ_1), line_intersect(L["e1"], _X2_EQ_1)))
    t3 = Polygon((scene.v2, line_intersect(L["e2"], _ANTI_DIAG), line_intersect(L["e1"], _ANTI_DIAG)))
    f = scene.f
    return RelaxationTriangles(t1, t2, t3, tuple(t.contains_interior(f) for t in (t1, t2, t3)))


class CaseTag(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    OUTSIDE = "outside"

    def __str__(self):
        return self.value


def case1_region_contains(p: SlopeParams, f: Point2) -> bool:
    """f in the closed intersection of T1, T2, T3."""
    u, v, w = p.astuple()
    x, y = f.x, f.y
    return (y >= -v * x and y <= w * x + 1 and y <= -u * (x - 1)
            and x <= 1 and y <= 1 and x + y >= 0)


def case_of(scene: Type3Scene) -> CaseTag:
    """Case1 if f is in all three T_i (boundaries included), Case2 if in
    exactly two interiors, otherwise Outside."""
    if case1_region_contains(scene.params, scene.f):
        return CaseTag.CASE1
    if sum(relaxation_triangles(scene).contains) == 2:
        return CaseTag.CASE2
    return CaseTag.OUTSIDE


def theta_geometric(scene: Type3Scene) -> Fraction:
    hit = line_intersect((scene.f, scene.v3), _ANTI_DIAG)
    return hit.y


def abc_coeffs(scene: Type3Scene) -> tuple[Fraction, Fraction, Fraction]:
    """a, b, c read off the gauges: psi_{T_i}(r_i) = 1 + (coefficient)."""
    rt = relaxation_triangles(scene)
    if not all(rt.contains):
        raise ContractError("a, b, c need f strictly inside T1, T2 and T3")
    r = scene.rays
    out = (psi(rt.t1, scene.f, r[0]) - 1, psi(rt.t2, scene.f, r[1]) - 1, psi(rt.t3, scene.f, r[2]) - 1)
    if min(out) <= 0:
        raise ContractError(f"nonpositive coefficient in {out}")
    return out


def geometric_reciprocal_sum(scene: Type3Scene) -> Fraction:
    a, b, c = abc_coeffs(scene)
    return 1 / a + 1 / b + 1 / c


def rel2_lp(scene: Type3Scene, which: Optional[Sequence[int]] = None) -> SmallLP:
    """Covering LP over the cuts of the T_i holding f strictly inside."""
    rt = relaxation_triangles(scene)
    idx = [i for i in range(3) if rt.contains[i]] if which is None else list(which)
    for i in idx:
        if not rt.contains[i]:
            raise ContractError(f"f is not interior to T{i + 1}")
    return closure_lp([rt.bodies[i] for i in idx], scene.instance)


def rel2_value(scene: Type3Scene, cross_check: bool = True) -> Fraction:
    rt = relaxation_triangles(scene)
    n = sum(rt.contains)
    if n < 2:
        raise ContractError("f must be interior to at least two of T1, T2, T3")
    if n == 3:
        val = dual_closed_form_3(*abc_coeffs(scene))
        if cross_check:
            sol = solve_min(rel2_lp(scene))
            if sol.status is not LpStatus.OPTIMAL or sol.value != val:
                raise CrossCheckError(f"closed form {val} vs simplex {sol.value} at {scene}")
        return val
    sol = solve_min(rel2_lp(scene))
    if sol.status is not LpStatus.OPTIMAL:
        raise CrossCheckError(f"relaxation LP ended {sol.status.value}")
    return sol.value


def rel1_value(scene: Type3Scene) -> Fraction:
    """LP value using only T1 and T2."""
    sol = solve_min(rel2_lp(scene, which=(0, 1)))
    if sol.status is not LpStatus.OPTIMAL:
        raise CrossCheckError(f"relaxation LP ended {sol.status.value}")
    return sol.value


def rel1_closed_form(p: SlopeParams, f: Point2) -> Fraction:
    A, B, _ = slope_terms(p)
    return dual_closed_form_2(1 / ((1 - f.x) * A), 1 / ((1 - f.y) * B))


def region_q_contains(p: SlopeParams, f: Point2) -> bool:
    v, w = p.v, p.w
    x, y = f.x, f.y
    return x <= Fraction(1, 2) and y >= -v * x and y >= -x and y <= w * x + 1 and y <= (1 - x) / 2


def meets_sqrt3(value) -> bool:
    """value >= sqrt(3), decided exactly by squaring."""
    value = rat(value)
    return value >= 0 and value * value >= 3


# --- sweeps ----------------------------------------------------------------


def _fracs(*xs) -> Axis:
    return tuple(Fraction(x) for x in xs)


DEFAULT_U = tuple(1 + x for x in _fracs("1/20", "1/10", "1/4", "1/2", "7/10", 1, "3/2", 2, 3, 5))
DEFAULT_V = _fracs("1/20", "1/10", "1/4", "1/2", "3/4", "9/10", "99/100", "999/1000")
DEFAULT_W = _fracs("1/10", "1/4", "1/2", 1, 2, 5, 10, 100, 1000)


@dataclass(frozen=True)
class ParamGrid:
    u: Axis = DEFAULT_U
    v: Axis = DEFAULT_V
    w: Axis = DEFAULT_W

    def axes(self) -> tuple[Axis, Axis, Axis]:
        return (tuple(map(rat, self.u)), tuple(map(rat, self.v)), tuple(map(rat, self.w)))


@dataclass(frozen=True)
class FGrid:
    f1: Axis
    f2: Axis

    @classmethod
    def uniform(cls, lo1, hi1, lo2, hi2, step) -> FGrid:
        return cls(frange(lo1, hi1, step), frange(lo2, hi2, step))

    def axes(self) -> tuple[Axis, Axis]:
        return (tuple(map(rat, self.f1)), tuple(map(rat, self.f2)))


def _with_extra(axis: Axis, extra) -> Axis:
    return tuple(sorted(set(axis) | {Fraction(x) for x in extra}))


# Both infima sit where f approaches a lattice point while the triangle
# degenerates (v -> 1, w -> infinity), so the uniform axes get a few extra
# values near 0.  For large w the edge x2 < w*x1 + 1 only admits f1 < 0
# of order 1/w, hence the powers of ten.
_NEAR_ZERO = ("1/100", "1/1000", "1/10000", "-1/100", "-1/1000", "-1/10000")
DEFAULT_Q_FGRID = FGrid(
    _with_extra(frange(-1, Fraction(1, 2), Fraction(1, 40)), _NEAR_ZERO),
    _with_extra(frange(Fraction(-1, 2), 1, Fraction(1, 40)), _NEAR_ZERO),
)
DEFAULT_CASE2_FGRID = FGrid(
    _with_extra(frange(-1, Fraction(-1, 40), Fraction(1, 40)), _NEAR_ZERO[3:]),
    frange(Fraction(-1, 2), Fraction(3, 2), Fraction(1, 40)),
)


@dataclass(frozen=True)
class SweepRow:
    u: Fraction
    v: Fraction
    w: Fraction
    f1: Fraction
    f2: Fraction
    case: str
    value: Fraction

    @classmethod
    def from_grid(cls, row: GridRow) -> SweepRow:
        return cls(*row.point, row.tag, row.value)

    @property
    def params(self) -> SlopeParams:
        return SlopeParams(self.u, self.v, self.w)

    @property
    def f(self) -> Point2:
        return Point2(self.f1, self.f2)


@dataclass
class SweepReport:
    quantity: str
    rows: list[SweepRow] = field(default_factory=list)
    best: Optional[SweepRow] = None
    evaluated: int = 0
    cross_checked: int = 0

    @property
    def empty(self) -> bool:
        return self.best is None

    @property
    def minimum(self) -> Fraction:
        if self.best is None:
            raise ContractError(f"{self.quantity}: no feasible grid point")
        return self.best.value


def fmt_decimal(x: Fraction, digits: int = 12) -> str:
    """``x`` with ``digits`` significant digits, rounded half-even exactly."""
    from decimal import Context, Decimal
    ctx = Context(prec=digits)
    return format(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)), "g")


SWEEP_COLUMNS = ("u", "v", "w", "f1", "f2", "case", "value")


def sweep_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    header = []
    for c in SWEEP_COLUMNS:
        header += [c] if c == "case" else [c, f"{c}_num", f"{c}_den"]
    wr.writerow(header)
    for r in report.rows:
        out = []
        for c in SWEEP_COLUMNS:
            x = getattr(r, c)
            out += [x] if c == "case" else [fmt_decimal(x), x.numerator, x.denominator]
        wr.writerow(out)
    return buf.getvalue()


@lru_cache(maxsize=4096)
def _family_ok(u: Fraction, v: Fraction, w: Fraction) -> Optional[tuple]:
    """Slope terms and edge data for a lattice-free family member, else None."""
    try:
        p = SlopeParams(u, v, w)
    except ValueError:
        return None
    if not family_f_triangle(p).is_lattice_free:
        return None
    return p, slope_terms(p)


def _in_triangle_strict(p: SlopeParams, x: Fraction, y: Fraction) -> bool:
    return y > -p.v * x and y < p.w * x + 1 and y < -p.u * (x - 1)


def _slope_sum_block(outer, inner_axes, region: str):
    ok = _family_ok(*outer)
    if ok is None:
        return []
    p, (A, B, C) = ok
    f1s, f2s = inner_axes
    half = Fraction(1, 2)
    out = []
    for x in f1s:
        if region == "q" and x > half:
            continue
        for y in f2s:
            if not _in_triangle_strict(p, x, y):
                continue
            f = Point2(x, y)
            if region == "q":
                if not region_q_contains(p, f):
                    continue
            elif not case1_region_contains(p, f):
                continue
            out.append(((x, y), (1 - x) * A + (1 - y) * B + (x + y) * C, CaseTag.CASE1.value))
    return out


def _case2_block(outer, inner_axes, mode: str):
    ok = _family_ok(*outer)
    if ok is None:
        return []
    p, (A, B, C) = ok
    f1s, f2s = inner_axes
    half = Fraction(1, 2)
    out = []
    for x in f1s:
        if mode == "basu" and x >= 0:
            continue
        for y in f2s:
            if not _in_triangle_strict(p, x, y):
                continue
            if mode == "basu":
                if x + y > half:
                    continue
                s = (1 - x) * A + (1 - y) * B
            else:
                inside = (x < 1, y < 1, x + y > 0)
                if sum(inside) != 2 or case1_region_contains(p, Point2(x, y)):
                    continue
                s = ((1 - x) * A if inside[0] else 0) + ((1 - y) * B if inside[1] else 0) \
                    + ((x + y) * C if inside[2] else 0)
            out.append(((x, y), s / (1 + s), CaseTag.CASE2.value))
    return out


def _block(outer, inner_axes, kind: str, mode: str):
    if kind == "slope-sum":
        return _slope_sum_block(outer, inner_axes, mode)
    return _case2_block(outer, inner_axes, mode)


def _search(kind: str, mode: str, param_grid, f_grid, rounds, workers, keep, zoom, span):
    from functools import partial
    param_grid = param_grid or ParamGrid()
    res = grid_search(partial(_block, kind=kind, mode=mode), param_grid.axes(), f_grid.axes(),
                      sense="min", rounds=rounds, zoom=zoom, span=span, workers=workers, keep=keep)
    return res


def _sample(rows: list, k: int, seed: int) -> list:
    if len(rows) <= k:
        return list(rows)
    return random.Random(seed).sample(rows, k)


def _check_slope_row(row: SweepRow) -> bool:
    """Recompute a slope-sum row geometrically; False if not strictly Case 1."""
    scene = build_scene(row.params, row.f)
    if not all(relaxation_triangles(scene).contains):
        return False
    got = geometric_reciprocal_sum(scene)
    if got != row.value:
        raise CrossCheckError(f"slope sum {row.value} vs geometric {got} at {row}")
    return True


def _check_case2_row(row: SweepRow, mode: str) -> bool:
    scene = build_scene(row.params, row.f)
    got = rel1_value(scene) if mode == "basu" else rel2_value(scene)
    if got != row.value:
        raise CrossCheckError(f"fast value {row.value} vs simplex {got} at {row}")
    return True


def min_over_region_q(param_grid: Optional[ParamGrid] = None, f_grid: Optional[FGrid] = None,
                      refinement_rounds: int = 3, *, region: str = "q", workers: int = 1,
                      keep: str = "block-best", zoom: int = 10, span: int = 3,
                      audit: int = 64, seed: int = 0) -> SweepReport:
    """Minimum slope sum over lattice-free family members and f in Q.

    ``region="case1"`` sweeps the whole closed Case-1 region instead.  f
    must be strictly inside the Type-3 triangle.  The incumbent and up to
    ``audit`` kept rows are recomputed through the gauges.
    """
    if region not in ("q", "case1"):
        raise ValueError("region must be 'q' or 'case1'")
    res = _search("slope-sum", region, param_grid, f_grid or DEFAULT_Q_FGRID,
                  refinement_rounds, workers, keep, zoom, span)
    rep = SweepReport("slope_sum", [SweepRow.from_grid(r) for r in res.rows],
                      SweepRow.from_grid(res.best) if res.best else None, res.evaluated)
    checks = _sample(rep.rows, audit, seed) + ([rep.best] if rep.best else [])
    rep.cross_checked = sum(_check_slope_row(r) for r in checks)
    return rep


def case2_min(param_grid: Optional[ParamGrid] = None, f_grid: Optional[FGrid] = None,
              refinement_rounds: int = 3, *, mode: str = "basu", workers: int = 1,
              keep: str = "block-best", zoom: int = 10, span: int = 3,
              audit: int = 64, seed: int = 0) -> SweepReport:
    """Minimum relaxation value over the positions of f outside Case 1.

    mode "basu": f1 < 0 and f1 + f2 <= 1/2 with the T1/T2 relaxation.
    mode "exact-two": f strictly inside exactly two T_i, with those two.
    """
    if mode not in ("basu", "exact-two"):
        raise ValueError("mode must be 'basu' or 'exact-two'")
    res = _search("case2", mode, param_grid, f_grid or DEFAULT_CASE2_FGRID,
                  refinement_rounds, workers, keep, zoom, span)
    rep = SweepReport("rel_value", [SweepRow.from_grid(r) for r in res.rows],
                      SweepRow.from_grid(res.best) if res.best else None, res.evaluated)
    checks = _sample(rep.rows, audit, seed) + ([rep.best] if rep.best else [])
    rep.cross_checked = sum(_check_case2_row(r, mode) for r in checks)
    return rep


def slope_sum_to_value(s) -> Fraction:
    """LP value ``1 - 1/(1+s)`` belonging to a reciprocal sum ``s``."""
    s = rat(s)
    return 1 - 1 / (1 + s)


def goemans_ratio(min_inf) -> Fraction:
    """Scale factor for a facet with rhs 1 whose left side is at least ``min_inf``."""
    min_inf = rat(min_inf)
    if not 0 < min_inf <= 1:
        raise ValueError("infimum must lie in (0, 1]")
    return 1 / min_inf


def overall_ub_certificate(case1: Optional[SweepReport], case2: Optional[SweepReport]) -> Fraction:
    if case1 is None or case2 is None:
        raise ContractError("both the Case-1 and the Case-2 report are required")
    v1 = slope_sum_to_value(case1.minimum) if case1.quantity == "slope_sum" else case1.minimum
    return goemans_ratio(min(v1, case2.minimum))


# --- random scenes -----------------------------------------------------------


def _rand_rat(rng: random.Random, lo: Fraction, hi: Fraction, den: int) -> Fraction:
    return lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)


def random_case1_scenes(n: int, seed: int = 0, den: int = 997) -> list[Type3Scene]:
    """``n`` scenes with lattice-free triangles and f strictly inside T1, T2, T3."""
    if n < 1:
        raise ValueError("need at least one scene")
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        p = SlopeParams(1 + _rand_rat(rng, Fraction(0), Fraction(4), den),
                        _rand_rat(rng, Fraction(0), Fraction(1), den),
                        _rand_rat(rng, Fraction(0), Fraction(5), den))
        if _family_ok(*p.astuple()) is None:
            continue
        for _ in range(200):
            f = Point2(_rand_rat(rng, Fraction(-1), Fraction(1), den),
                       _rand_rat(rng, Fraction(-1), Fraction(1), den))
            if not _in_triangle_strict(p, f.x, f.y):
                continue
            scene = build_scene(p, f)
            if all(relaxation_triangles(scene).contains):
                out.append(scene)
                break
    return out

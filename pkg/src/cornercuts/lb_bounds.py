"""Lower bound: a quadrilateral cut that triangles cannot match closely.

For the symmetric quadrilateral G(t) around f = (1/2, 1/2) the point
s = (m, m, m, m) satisfies every triangle cut on the four corner rays,
yet the quadrilateral cut needs it scaled by q = 1/(4m).  The scaling
peaks at t = 2 (b = 1/5) with q = 9/8.
"""
from __future__ import annotations

import csv
import io
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .gauge import psi
from .geom2d import Point2, Polygon, coords_in_ray_basis, line_intersect, pt, rat
from .grid import Axis, frange, grid_search
from .latticefree import (
    CENTER,
    ClassificationError,
    LatticeFreeSet,
    SlopeParams,
    family_f_triangle,
    subclass_g_quad,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SubclassGQuantities:
    t: Fraction
    a: Fraction
    b: Fraction
    lambda1: Fraction
    lambda2: Fraction
    threshold1: Fraction
    threshold2: Fraction
    pprime_x: Fraction
    m: Fraction
    q: Fraction

    @property
    def s_bar(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.m,) * 4

    def as_row(self) -> dict[str, Fraction]:
        return {"t": self.t, "a": self.a, "b": self.b, "lambda1": self.lambda1,
                "lambda2": self.lambda2, "thr1": self.threshold1, "thr2": self.threshold2,
                "m": self.m, "q": self.q}


def _ab(t) -> tuple[Fraction, Fraction, Fraction]:
    t = rat(t)
    if t <= 0:
        raise ValueError("t must be positive")
    return t, t / (1 + t * t), 1 / (1 + t * t)


def g_quantities(t) -> SubclassGQuantities:
    """Exact lambda, thresholds, P' and scaling for G(t).

    The construction needs t >= 1 (equivalently a >= b), where (1,1)
    splits as lambda1*r1 + lambda2*r4 with lambda1 >= lambda2; smaller t
    is refused.  G(1/t) is the mirror image of G(t) about the diagonal, so
    nothing is lost.
    """
    t, a, b = _ab(t)
    if t < 1:
        raise ValueError(f"t = {t} < 1: use 1/t, whose quadrilateral is the mirror image")
    d = (HALF + a) ** 2 + (b - HALF) ** 2
    lam1 = HALF * (1 + a - b) / d
    lam2 = HALF * (a + b) / d
    thr1 = (HALF + a) / HALF
    px = (a + b) * (2 * b - 1) / ((2 * b - 1) ** 2 + (2 * a + 1) * (a + b))
    thr2 = (HALF + a) / (HALF - px)
    m = lam1 / (2 + (lam1 - lam2) * (thr1 + thr2))
    return SubclassGQuantities(t, a, b, lam1, lam2, thr1, thr2, px, m, 1 / (4 * m))


def q_closed_form(t) -> Fraction:
    """q as a function of (a, b) alone, with sqrt(b(1-b)) replaced by a."""
    t, a, b = _ab(t)
    return ((2 * a + 1) ** 2 + (2 * b - 1) ** 2) * (a - 3 * b + 2) / (4 * (a - b + 1) ** 2)


def pprime_point(t) -> Point2:
    """P' by construction: P is where the ray along r2 meets x1 = 1, and P'
    is where the line through the origin and P meets the line along r3."""
    quad = subclass_g_quad(t)
    f = quad.f
    r = quad.rays
    P = line_intersect((f, f + r[1]), (pt(1, 0), pt(1, 1)))
    if P is None:
        raise ValueError("r2 is parallel to x1 = 1 (t = 1), so P does not exist")
    return line_intersect((pt(0, 0), P), (f, f + r[2]))


def _q_block(outer, inner_axes):
    (t,) = outer
    if t < 1:  # mirror images of t > 1
        return []
    return [((), q_closed_form(t), "")]


DEFAULT_T_GRID: Axis = frange(Fraction(1, 10), 10, Fraction(1, 10))


def maximize_q(t_grid: Optional[Sequence] = None, refinement_rounds: int = 3,
               workers: int = 1) -> tuple[Fraction, Fraction]:
    """Grid maximum of q over t with local refinement; returns (t*, q*).

    Grid points with t < 1 are skipped (their quadrilaterals are mirror
    images of t > 1 ones)."""
    axis = tuple(rat(x) for x in (DEFAULT_T_GRID if t_grid is None else t_grid))
    if not axis:
        raise ValueError("empty t grid")
    res = grid_search(_q_block, [axis], (), sense="max", rounds=refinement_rounds,
                      workers=workers, keep="none")
    if res.best is None:
        raise ValueError("no t >= 1 in the grid")
    return res.best.point[0], res.best.value


def q_sweep(t_grid: Optional[Sequence] = None) -> list[SubclassGQuantities]:
    """Quantities along the grid, skipping t < 1."""
    axis = DEFAULT_T_GRID if t_grid is None else t_grid
    return [g_quantities(t) for t in map(rat, axis) if t >= 1]


# --- maximal lattice-free triangles around (1/2, 1/2) ----------------------


@dataclass(frozen=True)
class TriangleSample:
    index: int
    family: str
    set: LatticeFreeSet
    params: tuple = ()
    seed: int = 0

    @property
    def body(self) -> Polygon:
        return self.set.body


_T1_CANON = (pt(0, 0), pt(2, 0), pt(0, 2))
_GENERATORS = (((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)),
               ((0, 1), (1, 0)), ((-1, 0), (0, 1)))


def _matmul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _apply(U, p: Point2) -> Point2:
    return Point2(U[0][0] * p.x + U[0][1] * p.y, U[1][0] * p.x + U[1][1] * p.y)


def _inverse(U):
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]  # +-1
    return ((U[1][1] * det, -U[0][1] * det), (-U[1][0] * det, U[0][0] * det))


def _random_unimodular(rng: random.Random, max_len: int = 3):
    U = ((1, 0), (0, 1))
    for _ in range(rng.randint(0, max_len)):
        U = _matmul(rng.choice(_GENERATORS), U)
    return U


def _frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _place(vertices, U, rng: random.Random) -> Optional[Polygon]:
    """Map a lattice-free triangle by x -> U(x - p) + f, where p is an
    interior point of the triangle congruent to U^-1 f modulo Z^2.  The map
    is an affine lattice automorphism and sends p to f."""
    body = Polygon(tuple(vertices))
    g = _apply(_inverse(U), CENTER)
    g0 = Point2(_frac_part(g.x), _frac_part(g.y))
    x0, x1, y0, y1 = body.bounding_box()
    cands = []
    for i in range(int(x0) - 1, int(x1) + 2):
        for j in range(int(y0) - 1, int(y1) + 2):
            p = Point2(g0.x + i, g0.y + j)
            if body.contains_interior(p):
                cands.append(p)
    if not cands:
        return None
    p = rng.choice(cands)
    return Polygon(tuple(_apply(U, v - p) + CENTER for v in body.vertices))


def _rand_frac(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 60) -> Fraction:
    """Random rational strictly between lo and hi on a 1/den-style mesh."""
    k = rng.randint(1, den - 1)
    return lo + (hi - lo) * Fraction(k, den)


def type2_canonical(h, p) -> Polygon:
    """Edge on x1 = 1, apex (-h, p) with 0 < p < 1; the other two edges pass
    through (0,0) and (0,1)."""
    h, p = rat(h), rat(p)
    apex = Point2(-h, p)
    low = line_intersect((apex, pt(0, 0)), (pt(1, 0), pt(1, 1)))
    high = line_intersect((apex, pt(0, 1)), (pt(1, 0), pt(1, 1)))
    return Polygon((apex, low, high))


_SQUARE_SYMS = (
    lambda q: q,
    lambda q: Point2(1 - q.y, q.x),
    lambda q: Point2(1 - q.x, 1 - q.y),
    lambda q: Point2(q.y, 1 - q.x),
    lambda q: Point2(q.y, q.x),
    lambda q: Point2(1 - q.x, q.y),
    lambda q: Point2(q.x, 1 - q.y),
    lambda q: Point2(1 - q.y, 1 - q.x),
)


def _sample_one(kind: str, rng: random.Random):
    if kind == "type1":
        U = _random_unimodular(rng)
        return _place(_T1_CANON, U, rng), ("U", U)
    if kind == "type2-edge":
        h = _rand_frac(rng, Fraction(0), Fraction(4))
        p = _rand_frac(rng, Fraction(0), Fraction(1))
        k = rng.randrange(8)
        body = type2_canonical(h, p).map(_SQUARE_SYMS[k])
        return body, ("h", h, "p", p, "sym", k)
    if kind == "type2-unimodular":
        h = _rand_frac(rng, Fraction(0), Fraction(4))
        p = _rand_frac(rng, Fraction(0), Fraction(1))
        U = _random_unimodular(rng)
        return _place(type2_canonical(h, p).vertices, U, rng), ("h", h, "p", p, "U", U)
    if kind == "type3":
        u = 1 + _rand_frac(rng, Fraction(0), Fraction(4))
        v = _rand_frac(rng, Fraction(0), Fraction(1))
        w = _rand_frac(rng, Fraction(0), Fraction(4))
        tri = family_f_triangle(SlopeParams(u, v, w))
        if not tri.is_lattice_free:
            return None, ()
        verts = tri.body.vertices
        flip = rng.random() < 0.5
        if flip:
            verts = tuple(q.swapped() for q in verts)
        U = _random_unimodular(rng)
        return _place(verts, U, rng), ("u", u, "v", v, "w", w, "flip", flip, "U", U)
    raise ValueError(kind)


SAMPLE_FAMILIES = ("type1", "type2-edge", "type2-unimodular", "type3")


def triangle_samples(n: int, seed: int = 0, retry_budget: int = 20) -> list[TriangleSample]:
    """Deterministic mix of maximal lattice-free triangles with (1/2,1/2) inside.

    Sample 0 is always the triangle (0,0), (2,0), (0,2).  The rest cycle
    through unimodular images of it, Type-2 triangles with an edge on a
    side line of the unit square, unimodular images of those, and Type-3
    family members.  Every sample is re-validated.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    out = [TriangleSample(0, "type1", LatticeFreeSet.of(Polygon(_T1_CANON)), ("canonical",), seed)]
    failures = 0
    i = 1
    while len(out) < n:
        kind = SAMPLE_FAMILIES[i % len(SAMPLE_FAMILIES)]
        i += 1
        body, meta = _sample_one(kind, rng)
        ok = False
        if body is not None and body.contains_interior(CENTER):
            try:
                lf = LatticeFreeSet.of(body)
                ok = lf.classification.value.startswith("triangle")
            except ClassificationError:
                ok = False
        if not ok:
            failures += 1
            if failures > retry_budget * n:
                warnings.warn(f"triangle generator gave up after {len(out)} of {n} samples")
                break
            continue
        out.append(TriangleSample(len(out), kind, lf, meta, seed))
    return out


# --- membership of s_bar in the triangle closure ----------------------------


@dataclass(frozen=True)
class MembershipRow:
    sample_id: int
    family: str
    total: Optional[Fraction]  # sum_i psi_B(r_i) * m
    slack: Optional[Fraction]
    skipped: bool = False


@dataclass
class ClosureMembershipReport:
    t: Fraction
    m: Fraction
    rows: list[MembershipRow] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.rows)

    @property
    def skipped(self) -> int:
        return sum(r.skipped for r in self.rows)

    @property
    def min_slack(self) -> Optional[Fraction]:
        vals = [r.slack for r in self.rows if not r.skipped]
        return min(vals) if vals else None

    @property
    def witness(self) -> Optional[MembershipRow]:
        vals = [r for r in self.rows if not r.skipped]
        return min(vals, key=lambda r: r.slack) if vals else None

    @property
    def passed(self) -> bool:
        s = self.min_slack
        return s is not None and s >= 0


def closure_membership_check(t, samples: Sequence[TriangleSample]) -> ClosureMembershipReport:
    quad = subclass_g_quad(t)
    gq = g_quantities(t)
    rep = ClosureMembershipReport(gq.t, gq.m)
    for s in samples:
        if not s.body.contains_interior(quad.f):
            rep.rows.append(MembershipRow(s.index, s.family, None, None, True))
            continue
        total = sum((psi(s.body, quad.f, r) for r in quad.rays), Fraction(0)) * gq.m
        rep.rows.append(MembershipRow(s.index, s.family, total, total - 1))
    return rep


# --- the two cases of the membership argument --------------------------------


@dataclass(frozen=True)
class AuditRecord:
    sample_id: int
    psi: tuple[Fraction, Fraction, Fraction, Fraction]
    pair12: Fraction  # lambda2*psi(r1) + lambda1*psi(r2)
    pair34: Fraction  # lambda2*psi(r3) + lambda1*psi(r4)
    case1_ok: bool
    eq5: Optional[Fraction] = None  # lambda1*psi(r3) + lambda2*psi(r2)
    eq6: Optional[Fraction] = None  # lambda1*psi(r4) + lambda2*psi(r3)
    case2_ok: Optional[bool] = None


def case_inequality_audit(t, sample: TriangleSample, constructed_case2: bool = False) -> AuditRecord:
    """Both pair sums are at least 1 for any lattice-free B; for the
    constructed Case-2 triangles the two side equalities hold exactly."""
    quad = subclass_g_quad(t)
    gq = g_quantities(t)
    g = tuple(psi(sample.body, quad.f, r) for r in quad.rays)
    l1, l2 = gq.lambda1, gq.lambda2
    p12 = l2 * g[0] + l1 * g[1]
    p34 = l2 * g[2] + l1 * g[3]
    rec = AuditRecord(sample.index, g, p12, p34, p12 >= 1 and p34 >= 1)
    if constructed_case2:
        e5 = l1 * g[2] + l2 * g[1]
        e6 = l1 * g[3] + l2 * g[2]
        rec = AuditRecord(sample.index, g, p12, p34, rec.case1_ok, e5, e6, e5 == 1 and e6 == 1)
    return rec


def case2_mu_range(t) -> tuple[Fraction, Fraction]:
    """Open interval of mu for which case2_triangle(t, mu) is well formed
    with its apex beyond P' (so psi_B(r3) < threshold2)."""
    gq = g_quantities(t)
    r3 = subclass_g_quad(t).rays[2]
    lo = 1 / gq.threshold2
    # the apex must keep 0 < x2 < 1 so that the edges through (0,0), (0,1) close up
    hi = (HALF / -r3.y) if r3.y < 0 else (HALF / r3.y if r3.y > 0 else None)
    return lo, hi


def case2_triangle(t, mu) -> TriangleSample:
    """Triangle with edge x1 = 1 and apex f + mu*r3, its other edges through
    (0,0) and (0,1)."""
    quad = subclass_g_quad(t)
    apex = quad.f + quad.rays[2] * rat(mu)
    if not (apex.x < 0 and 0 < apex.y < 1):
        raise ValueError(f"apex {apex} does not give a Type-2 triangle with edge x1 = 1")
    body = type2_canonical(-apex.x, apex.y)
    return TriangleSample(-1, "case2-construction", LatticeFreeSet.of(body), ("mu", rat(mu)))


# --- reports ------------------------------------------------------------------


def _num_cols(x: Fraction) -> list:
    from .ub_bounds import fmt_decimal
    return [fmt_decimal(x), x.numerator, x.denominator]


Q_SWEEP_COLUMNS = ("t", "a", "b", "lambda1", "lambda2", "thr1", "thr2", "m", "q")


def q_sweep_csv(rows: Sequence[SubclassGQuantities]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow([h for c in Q_SWEEP_COLUMNS for h in (c, f"{c}_num", f"{c}_den")])
    for r in rows:
        d = r.as_row()
        wr.writerow([x for c in Q_SWEEP_COLUMNS for x in _num_cols(d[c])])
    return buf.getvalue()


def membership_csv(rep: ClosureMembershipReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["sample_id", "family", "sum", "sum_num", "sum_den", "slack", "slack_num", "slack_den"])
    for r in rep.rows:
        if r.skipped:
            wr.writerow([r.sample_id, r.family, "skipped", "", "", "skipped", "", ""])
        else:
            wr.writerow([r.sample_id, r.family, *_num_cols(r.total), *_num_cols(r.slack)])
    return buf.getvalue()


def basis_coords_of_11(t) -> tuple[Fraction, Fraction]:
    """Coordinates of (1,1) in the basis (r1, r4) from f."""
    quad = subclass_g_quad(t)
    return coords_in_ray_basis(pt(1, 1), quad.f, quad.rays[0], quad.rays[3])

from fractions import Fraction

import pytest
from hypothesis import strategies as st


def fr(x):
    return Fraction(x)


def rationals(lo, hi, max_den=60):
    """Rationals strictly inside (lo, hi) with bounded denominators."""
    lo, hi = Fraction(lo), Fraction(hi)
    return st.integers(1, max_den - 1).map(lambda k: lo + (hi - lo) * Fraction(k, max_den))


# --- brute-force classification, written from the definitions only ----------

def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def brute_classify(verts):
    """Re-derive maximality and type of a polygon from its vertex list.

    Independent of the library: plain tuples, its own orientation handling
    and point-in-polygon test, definitions of the three triangle types
    applied literally.  Returns None when the set is not maximal lattice-free.
    """
    vs = [(Fraction(x), Fraction(y)) for x, y in verts]
    n = len(vs)
    area2 = sum(_cross(*vs[i], *vs[(i + 1) % n]) for i in range(n))
    if area2 < 0:
        vs = vs[::-1]
    edges = [(vs[i], vs[(i + 1) % n]) for i in range(n)]

    def side(p, e):
        (ax, ay), (bx, by) = e
        return _cross(bx - ax, by - ay, p[0] - ax, p[1] - ay)

    xs = [v[0] for v in vs]
    ys = [v[1] for v in vs]
    import math
    interior, on_edge = [], [[] for _ in edges]
    for x in range(math.floor(min(xs)) - 1, math.ceil(max(xs)) + 2):
        for y in range(math.floor(min(ys)) - 1, math.ceil(max(ys)) + 2):
            p = (Fraction(x), Fraction(y))
            s = [side(p, e) for e in edges]
            if all(v > 0 for v in s):
                interior.append(p)
            elif all(v >= 0 for v in s):
                for k, v in enumerate(s):
                    if v == 0:
                        on_edge[k].append(p)
    if interior:
        return None
    rel_int = [[p for p in pts if p not in e] for pts, e in zip(on_edge, edges)]
    if not all(rel_int):
        return None
    if n == 4:
        return "quadrilateral"
    integral = [v[0].denominator == 1 and v[1].denominator == 1 for v in vs]
    boundary = {p for pts in on_edge for p in pts}
    if all(integral) and all(len(r) == 1 for r in rel_int):
        return "triangle-type-1"
    if len(boundary) == 3 and all(len(r) == 1 for r in rel_int):
        return "triangle-type-3"
    # Type 2: a fractional vertex whose two edges carry one point each,
    # third edge with at least two
    for i in range(3):
        if integral[i]:
            continue
        inc = [k for k in range(3) if vs[i] in edges[k]]
        opp = [k for k in range(3) if k not in inc][0]
        if all(len(rel_int[k]) == 1 for k in inc) and len(on_edge[opp]) >= 2:
            return "triangle-type-2"
    return "unclassified"


@pytest.fixture(scope="session")
def samples_small():
    from cornercuts.lb_bounds import triangle_samples
    return triangle_samples(200, seed=7)

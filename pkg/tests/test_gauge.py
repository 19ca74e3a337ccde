from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornercuts.gauge import (
    CutInequality,
    RcpInstance,
    ReductionError,
    closure_lp,
    corner_ray_reduce,
    cut,
    normalize_rays,
    psi,
)
from cornercuts.geom2d import NotInteriorError, Polygon, pt
from cornercuts.latticefree import split, subclass_g_quad
from cornercuts.lp import solve_min

from conftest import rationals

HALF = pt(F(1, 2), F(1, 2))
T1 = Polygon((pt(0, 0), pt(2, 0), pt(0, 2)))
G2 = subclass_g_quad(2)
SETS = [T1, G2.body, split(0, 1, 0), split(1, 0, 0), subclass_g_quad(F(7, 3)).body,
        Polygon((pt(F(-1, 2), F(1, 2)), pt(1, -1), pt(1, 2)))]

ray = st.tuples(rationals(-3, 3, 31), rationals(-3, 3, 31)).map(lambda t: pt(*t)).filter(lambda r: not r.is_zero())


def test_psi_examples():
    s = split(0, 1, 0)
    assert psi(s, HALF, pt(0, 1)) == 2
    assert psi(s, HALF, pt(1, 0)) == 0
    assert psi(G2.body, HALF, pt(F(9, 10), F(3, 10))) == 1


def test_cut_examples():
    inst = RcpInstance(HALF, G2.rays)
    assert cut(T1, inst).coeffs == (F(6, 5), F(9, 5), F(9, 5), F(3, 5))
    assert cut(G2.body, inst).coeffs == (1, 1, 1, 1)
    assert cut(split(0, 1, 0), RcpInstance(HALF, (pt(0, 1), pt(1, 0)))).coeffs == (2, 0)
    with pytest.raises(NotInteriorError):
        cut(T1, RcpInstance(pt(F(3, 2), F(3, 2)), (pt(1, 0),)))


def test_cut_inequality_helpers():
    c = CutInequality((F(1), F(2)))
    assert c.lhs((F(1, 2), F(1, 4))) == 1 and c.satisfied_by((F(1, 2), F(1, 4)))
    assert not c.satisfied_by((0, F(1, 3)))


def test_instance_validation():
    with pytest.raises(ValueError):
        RcpInstance(pt(0, 1), (pt(1, 0),))
    with pytest.raises(ValueError):
        RcpInstance(HALF, (pt(0, 0),))


def test_normalize_rays_puts_tips_on_boundary():
    inst = normalize_rays(T1, RcpInstance(HALF, (pt(1, 0), pt(3, 3), pt(-1, 0))))
    assert [T1.on_boundary(HALF + r) for r in inst.rays] == [True, True, True]


def test_corner_ray_reduce_examples():
    r1, r2 = pt(1, 0), pt(0, 1)
    inst = RcpInstance(HALF, (r1, r2, (r1 + r2) / 2))
    red, steps = corner_ray_reduce(inst, [0, 1])
    assert red.rays == (r1, r2)
    assert steps[0].lam == F(1, 2)
    same, none = corner_ray_reduce(inst, [0, 1, 2])
    assert same.rays == inst.rays and none == []
    with pytest.raises(ReductionError):
        corner_ray_reduce(RcpInstance(HALF, (r1, r2, r1 + r2)), [0, 1])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(range(len(SETS))), ray, rationals(0, 7, 23))
def test_positive_homogeneity(k, r, c):
    s = SETS[k]
    assert psi(s, HALF, r * c) == c * psi(s, HALF, r)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(range(len(SETS))), ray, ray)
def test_subadditivity(k, r1, r2):
    s = SETS[k]
    if (r1 + r2).is_zero():
        return
    assert psi(s, HALF, r1 + r2) <= psi(s, HALF, r1) + psi(s, HALF, r2)


def test_zero_cuts_dropped_from_closure_lp():
    inst = RcpInstance(HALF, (pt(1, 0),))
    lp = closure_lp([split(0, 1, 0)], inst)
    assert lp.rows == ()
    assert solve_min(lp).value == 0


def test_reduction_preserves_closure_lp_value():
    rng = random.Random(3)
    corners = G2.rays
    extra = []
    for i in range(4):
        lam = F(rng.randint(1, 9), 10)
        extra.append(corners[i] * lam + corners[(i + 1) % 4] * (1 - lam))
    inst = RcpInstance(HALF, corners + tuple(extra))
    family = [T1, split(0, 1, 0), split(1, 0, 0), Polygon((pt(F(-1, 2), F(1, 2)), pt(1, -1), pt(1, 2)))]
    red, steps = corner_ray_reduce(inst, range(4))
    for st_ in steps:
        assert inst.rays[st_.dropped] == corners[st_.corner_a] * st_.lam + corners[st_.corner_b] * (1 - st_.lam)
    assert solve_min(closure_lp(family, inst)).value == solve_min(closure_lp(family, red)).value

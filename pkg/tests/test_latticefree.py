from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from cornercuts.geom2d import Polygon, pt
from cornercuts.latticefree import (
    Classification,
    ClassificationError,
    LatticeFreeSet,
    SlopeParams,
    classify,
    family_f_triangle,
    is_maximal_lattice_free,
    reflect_about_diagonal,
    rotate_quarter,
    split,
    subclass_g_quad,
)

from conftest import brute_classify, rationals

T1 = Polygon((pt(0, 0), pt(2, 0), pt(0, 2)))
G2_QUAD = Polygon((pt("1.4", "0.8"), pt("0.8", "-0.4"), pt("-0.4", "0.2"), pt("0.2", "1.4")))
TYPE3 = Polygon((pt(F(4, 3), F(-2, 3)), pt(F(1, 3), F(4, 3)), pt(F(-2, 3), F(1, 3))))


def test_maximality_examples():
    assert is_maximal_lattice_free(G2_QUAD)
    assert is_maximal_lattice_free(T1)
    assert not is_maximal_lattice_free(Polygon((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1))))
    assert not is_maximal_lattice_free(Polygon((pt(-1, -1), pt(3, -1), pt(-1, 3))))  # (0,0) inside


def test_classify_examples():
    assert classify(T1) is Classification.TRIANGLE1
    assert classify(TYPE3) is Classification.TRIANGLE3
    assert classify(split(0, 1, 0)) is Classification.SPLIT
    assert classify(G2_QUAD) is Classification.QUADRILATERAL
    with pytest.raises(ClassificationError):
        classify(Polygon((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1))))


def test_split_maximality():
    assert is_maximal_lattice_free(split(1, 2, 3))
    assert not is_maximal_lattice_free(split(2, 4, 0))  # not primitive
    from cornercuts.geom2d import Strip
    assert not is_maximal_lattice_free(Strip.from_bounds(pt(0, 1), F(1, 2), F(3, 2)))


def test_family_triangle_example():
    tri = family_f_triangle(SlopeParams(2, F(1, 2), 1))
    assert (tri.v_e1_origin, tri.v_e1_e2, tri.v_e2_origin) == (
        pt(F(4, 3), F(-2, 3)), pt(F(1, 3), F(4, 3)), pt(F(-2, 3), F(1, 3)))
    assert tri.is_lattice_free
    assert tri.lattice_free_set().classification is Classification.TRIANGLE3


def test_slope_params_validation_and_mapping():
    with pytest.raises(ValueError):
        SlopeParams(1, F(1, 2), 1)
    with pytest.raises(ValueError):
        SlopeParams(2, 1, 1)
    assert SlopeParams.from_family(F(1, 4), F(1, 2), 3).astuple() == (3, F(1, 2), 4)


def test_subclass_g_examples():
    q = subclass_g_quad(2)
    assert (q.a, q.b) == (F(2, 5), F(1, 5))
    assert q.vertices == (pt(F(7, 5), F(4, 5)), pt(F(4, 5), F(-2, 5)), pt(F(-2, 5), F(1, 5)), pt(F(1, 5), F(7, 5)))
    d = subclass_g_quad(1)
    assert d.vertices == (pt(F(3, 2), F(1, 2)), pt(F(1, 2), F(-1, 2)), pt(F(-1, 2), F(1, 2)), pt(F(1, 2), F(3, 2)))
    assert classify(d.body) is Classification.QUADRILATERAL
    with pytest.raises(ValueError):
        subclass_g_quad(0)


def test_reflection_examples():
    s = reflect_about_diagonal(LatticeFreeSet.of(T1))
    assert s.body.vertex_set() == T1.vertex_set()
    r = reflect_about_diagonal(LatticeFreeSet.of(TYPE3))
    assert r.body.vertex_set() == {pt(F(-2, 3), F(4, 3)), pt(F(4, 3), F(1, 3)), pt(F(1, 3), F(-2, 3))}
    assert classify(r.body) is Classification.TRIANGLE3


@settings(max_examples=60, deadline=None)
@given(rationals(0, 10, 37))
def test_g_inverse_is_mirror_image(t):
    a = subclass_g_quad(t).body.vertex_set()
    b = subclass_g_quad(1 / t).body.map(lambda p: p.swapped()).vertex_set()
    assert a == b


@settings(max_examples=60, deadline=None)
@given(rationals(0, 10, 37))
def test_g_is_invariant_under_quarter_turn(t):
    q = subclass_g_quad(t).body
    assert q.map(rotate_quarter).vertex_set() == q.vertex_set()


@settings(max_examples=80, deadline=None)
@given(rationals(1, 6, 41), rationals(0, 1, 41), rationals(0, 6, 41))
def test_family_members_agree_with_brute_force(u, v, w):
    tri = family_f_triangle(SlopeParams(u, v, w))
    expect = brute_classify([(p.x, p.y) for p in tri.body.vertices])
    assert tri.is_lattice_free == (expect == "triangle-type-3")
    if tri.is_lattice_free:
        assert classify(tri.body).value == expect

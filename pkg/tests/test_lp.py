from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from cornercuts.lp import (
    LpStatus,
    SmallLP,
    check_optimality,
    covering_matrix_3,
    dual_closed_form_2,
    dual_closed_form_3,
    solve_min,
)

from conftest import rationals


def test_symmetric_covering():
    sol = solve_min(covering_matrix_3(1, 1, 1))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.value == F(3, 4)
    assert sol.primal == (F(1, 4),) * 3
    assert check_optimality(covering_matrix_3(1, 1, 1), sol)


def test_closed_form_examples():
    assert dual_closed_form_3(1, 1, 1) == F(3, 4)
    assert dual_closed_form_3(1, 2, 3) == F(11, 17)
    sol = solve_min(covering_matrix_3(1, 2, 3))
    assert sol.value == F(11, 17)
    assert sol.primal == sol.dual == (F(6, 17), F(3, 17), F(2, 17))


def test_trivial_lps():
    assert solve_min(SmallLP((1,), (((1,), 1),))).value == 1
    assert solve_min(SmallLP((1,), (((-1,), 1),))).status is LpStatus.INFEASIBLE
    assert solve_min(SmallLP((-1,), (((1,), 1),))).status is LpStatus.UNBOUNDED
    assert solve_min(SmallLP((1, 1), ())).value == 0


def test_redundant_rows():
    lp = SmallLP((1, 1), (((1, 1), 1), ((2, 2), 2), ((1, 0), 0)))
    sol = solve_min(lp)
    assert sol.value == 1
    assert check_optimality(lp, sol)


def test_negative_rhs_row():
    lp = SmallLP((1, 2), (((1, 1), 2), ((-1, 0), -1)))  # s1 <= 1
    sol = solve_min(lp)
    assert sol.value == 3 and sol.primal == (1, 1)
    assert check_optimality(lp, sol)


def test_closed_form_rejects_nonpositive():
    with pytest.raises(ValueError):
        dual_closed_form_3(0, 1, 1)
    with pytest.raises(ValueError):
        dual_closed_form_2(1, -1)


def test_two_row_symmetric_instance():
    # rows (1+a, 1, 1) and (1, 1+a, 1): value 2/(2+a)
    for a in (F(1, 3), F(1), F(5, 2)):
        lp = SmallLP.covering([(1 + a, 1, 1), (1, 1 + a, 1)])
        assert solve_min(lp).value == 2 / (2 + a) == dual_closed_form_2(a, a)


@settings(max_examples=150, deadline=None)
@given(rationals(0, 20, 97), rationals(0, 20, 97), rationals(0, 20, 97))
def test_closed_form_matches_simplex(a, b, c):
    lp = covering_matrix_3(a, b, c)
    sol = solve_min(lp)
    assert sol.value == dual_closed_form_3(a, b, c)
    assert check_optimality(lp, sol)


@settings(max_examples=100, deadline=None)
@given(rationals(0, 20, 97), rationals(0, 20, 97))
def test_two_row_closed_form_matches_simplex(a, b):
    lp = SmallLP.covering([(1 + a, 1, 1), (1, 1 + b, 1)])
    assert solve_min(lp).value == dual_closed_form_2(a, b)

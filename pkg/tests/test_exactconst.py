"""Exact-constant arithmetic: normal form, algebra, and float evaluation."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gaplab.exactconst import LOG2, ExactConst, factor_int


def test_factor_int():
    assert factor_int(1) == {}
    assert factor_int(12) == {2: 2, 3: 1}
    assert factor_int(97) == {97: 1}
    with pytest.raises(ValueError):
        factor_int(0)


def test_log_normal_form():
    # log(8/9) = 3 log 2 - 2 log 3
    c = ExactConst.log_of(Fraction(8, 9))
    assert c.log_coeff(2) == 3
    assert c.log_coeff(3) == -2
    assert c.rat == 0
    assert math.isclose(float(c), math.log(8 / 9), abs_tol=1e-14)


def test_log_of_one_is_zero():
    assert ExactConst.log_of(1).is_zero


def test_cancellation_is_exact():
    # log(6) - log(3) - log(2) == 0 exactly
    c = ExactConst.log_of(6) - ExactConst.log_of(3) - ExactConst.log_of(2)
    assert c.is_zero


def test_rational_scaling():
    c = (ExactConst(Fraction(1, 2)) + LOG2) * Fraction(3, 2)
    assert c.rat == Fraction(3, 4)
    assert c.log_coeff(2) == Fraction(3, 2)


def test_product_of_two_logs_rejected():
    with pytest.raises(ValueError):
        LOG2 * LOG2


def test_equality_and_hash():
    a = ExactConst(1) - LOG2
    b = ExactConst(1) + ExactConst.log_of(Fraction(1, 2))
    assert a == b
    assert hash(a) == hash(b)


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)
pos_rationals = st.fractions(min_value=Fraction(1, 50), max_value=10, max_denominator=50)


@given(rationals, pos_rationals, pos_rationals)
def test_log_additivity(coeff, x, y):
    lhs = ExactConst.log_of(x * y, coeff)
    rhs = ExactConst.log_of(x, coeff) + ExactConst.log_of(y, coeff)
    assert lhs == rhs


@given(pos_rationals, rationals, rationals)
def test_distributivity_over_rationals(x, p, q):
    c = ExactConst.log_of(x) + ExactConst(Fraction(1, 3))
    assert c * p + c * q == c * (p + q)


@given(pos_rationals)
def test_float_matches_math_log(x):
    assert float(ExactConst.log_of(x)) == pytest.approx(math.log(x), rel=1e-14, abs=1e-14)

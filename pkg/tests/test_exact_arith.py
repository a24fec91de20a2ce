from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import QQ

from tractorbgg.exact_arith import (CoordinateRing, PoleError, format_rational, from_json,
                                    rational, to_json)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**6)


@given(fractions)
def test_rational_text_roundtrip(f):
    assert rational(format_rational(rational(f))) == QQ(f.numerator, f.denominator)
    assert Fraction(format_rational(rational(f))) == f


def test_rational_rejects_float_and_zero_denominator():
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(ZeroDivisionError):
        rational("1/0")


def test_format_integers_without_slash():
    assert format_rational(QQ(6, 3)) == "2"
    assert format_rational(QQ(-3, 6)) == "-1/2"


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(0, 3), st.integers(0, 3)), max_size=5))
def test_poly_json_roundtrip(terms):
    K = CoordinateRing(2)
    f = K.poly([(c, [a, b]) for c, a, b in terms])
    assert from_json(K, to_json(f)) == f


def test_rational_function_json_roundtrip():
    K = CoordinateRing(2, rational_functions=True)
    x, y = K.gens
    f = (x + 1) / (y ** 2 + 1)
    assert from_json(K, to_json(f)) == f


@given(st.integers(-4, 4), st.integers(0, 4), st.integers(0, 4))
def test_derivative_matches_power_rule(c, a, b):
    K = CoordinateRing(2)
    f = K.poly([(c, [a, b])])
    want = K.poly([(c * a, [a - 1, b])]) if a else K.zero
    assert K.derivative(f, 0) == want


def test_derivative_of_plain_constant_is_zero():
    K = CoordinateRing(3)
    assert K.derivative(0, 1) == K.zero
    assert K.derivative(QQ(5), 2) == K.zero


def test_quotient_rule():
    K = CoordinateRing(2, rational_functions=True)
    x, y = K.gens
    f = x / (1 + x * y)
    assert K.derivative(f, 0) == 1 / (1 + x * y) ** 2


def test_evaluate_and_pole():
    K = CoordinateRing(2, rational_functions=True)
    x, y = K.gens
    assert K.evaluate(x * y + 1, [QQ(2), QQ(1, 2)]) == 2
    with pytest.raises(PoleError):
        K.evaluate(1 / x, [0, 1])

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from ietlab.field import ExactNumber, is_squarefree, sign_of

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)
fields = st.sampled_from([2, 3, 5, 7])


def as_mp(x: ExactNumber):
    return mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(x.N)


def test_golden_ratio_identity():
    phi = ExactNumber(Fraction(-1, 2), Fraction(1, 2), 5)
    assert 0 < phi < 1
    assert phi * phi + phi == 1
    assert (1 / phi) - phi == 1


def test_rationals_mix_with_any_field():
    x = ExactNumber(Fraction(1, 3), 0, 2)
    y = ExactNumber(0, 1, 5)
    assert (x + y).N == 5
    assert x == Fraction(1, 3)


def test_squarefree():
    assert [n for n in range(2, 20) if is_squarefree(n)] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]


@given(fractions, fractions, fields)
def test_sign_matches_high_precision(a, b, N):
    with mpmath.workdps(60):
        v = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(N)
        expected = 0 if v == 0 else (1 if v > 0 else -1)
    assert sign_of(a, b, N) == expected


@given(fractions, fractions, fractions, fractions, fields)
def test_field_operations(a1, b1, a2, b2, N):
    x, y = ExactNumber(a1, b1, N), ExactNumber(a2, b2, N)
    with mpmath.workdps(60):
        assert abs(as_mp(x * y) - as_mp(x) * as_mp(y)) < mpmath.mpf(10) ** -40
        assert abs(as_mp(x - y) - (as_mp(x) - as_mp(y))) < mpmath.mpf(10) ** -40
        if y != 0:
            assert (x / y) * y == x
    assert (x < y) == (as_mp(x) < as_mp(y))
    assert x.norm() == a1 * a1 - N * b1 * b1


def test_json_round_trip():
    x = ExactNumber(Fraction(3, 7), Fraction(-2, 9), 3)
    assert ExactNumber.from_json(x.to_json(), 3) == x


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ExactNumber(1, 1, 2) / ExactNumber(0, 0, 2)

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from hypothesis.strategies import composite

from qmcexact.badic import (
    BAdicNumber, BAdicPoint, BaseMismatchError, digit_add, digit_sub, format_rational,
    lcp_lengths, leading_zeros, parse_rational, point_add, point_sub, point_valuation,
    to_rational, truncate, valuation,
)

from strategies import badic_numbers, badic_pairs


def num(text: str, b: int) -> BAdicNumber:
    """``"0.0101"`` -> digits in base ``b``."""
    return BAdicNumber(b, tuple(int(c) for c in text.split(".")[1]))


def test_truncate_examples():
    assert truncate(num("0.11", 2), 0).value == 0
    assert truncate(num("0.11", 2), 1).value == Fraction(1, 2)
    corner = BAdicNumber.from_fraction(Fraction(5, 16), 2, 8)  # 1/4 + 1/16
    assert truncate(corner, 4).value == Fraction(5, 16)
    assert truncate(num("0.11", 2), 5) == num("0.11", 2)
    with pytest.raises(ValueError):
        truncate(num("0.1", 2), -1)


def test_digit_add_examples():
    assert digit_add(num("0.11", 2), num("0.01", 2)) == num("0.10", 2)
    assert digit_add(num("0.2", 3), num("0.2", 3)) == num("0.1", 3)
    assert digit_sub(num("0.10", 2), num("0.01", 2)) == num("0.11", 2)
    x = num("0.1201", 3)
    assert digit_add(x, BAdicNumber.zero(3, 4)) == x
    assert digit_sub(x, x).value == 0


def test_digit_ops_reject_mixed_bases():
    with pytest.raises(BaseMismatchError):
        digit_add(num("0.1", 2), num("0.1", 3))
    with pytest.raises(BaseMismatchError):
        digit_sub(num("0.1", 2), num("0.1", 3))


def test_precision_is_max_of_inputs():
    assert digit_add(num("0.1", 2), num("0.001", 2)).precision == 3


def test_valuation_examples():
    assert valuation(num("0.001", 2)) == Fraction(1, 8)
    assert valuation(num("0.2", 5)) == Fraction(1, 5)
    assert valuation(BAdicNumber.zero(2, 6)) == 0
    assert leading_zeros(BAdicNumber.zero(2, 3)) is None


def test_point_valuation_examples():
    assert point_valuation(BAdicPoint((num("0.1", 2), num("0.01", 2)))) == Fraction(1, 8)
    assert point_valuation(BAdicPoint((num("0.00", 2), num("0.00", 2)))) == 0
    assert point_valuation(BAdicPoint((num("0.1", 2), num("0.00", 2)))) == 0
    with pytest.raises(BaseMismatchError):
        point_valuation(BAdicPoint((num("0.1", 2), num("0.1", 3))))


def test_to_rational_examples():
    assert to_rational(num("0.1", 2)) == Fraction(1, 2)
    assert to_rational(num("0.11", 2)) == Fraction(3, 4)
    assert to_rational(num("0.12", 3)) == Fraction(5, 9)


def test_rendering():
    assert str(num("0.0101", 2)) == "0.0101 (base 2)"
    assert format_rational(Fraction(6, 8)) == "3/4"
    assert format_rational(0) == "0"
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2


def test_from_fraction_exactness():
    assert BAdicNumber.from_fraction(Fraction(7, 9), 3, 2).digits == (2, 1)
    with pytest.raises(ValueError):
        BAdicNumber.from_fraction(Fraction(1, 3), 2, 10)
    assert BAdicNumber.from_fraction(Fraction(1, 3), 2, 4, exact=False).digits == (0, 1, 0, 1)
    with pytest.raises(ValueError):
        BAdicNumber.from_fraction(Fraction(1), 2, 3)


def test_equality_ignores_trailing_zeros():
    assert num("0.10", 2) == num("0.1", 2)
    assert hash(num("0.10", 2)) == hash(num("0.1", 2))
    assert num("0.1", 2) != num("0.1", 3)


def test_invalid_digits():
    with pytest.raises(ValueError):
        BAdicNumber(2, (2,))
    with pytest.raises(ValueError):
        BAdicNumber(1, ())


@given(badic_pairs())
def test_shift_round_trip(pair):
    x, sigma = pair
    assert digit_sub(digit_add(x, sigma), sigma) == x
    assert digit_add(digit_sub(x, sigma), sigma) == x


@given(badic_numbers(), st.integers(0, 12), st.integers(0, 12))
def test_truncation_idempotent_and_monotone(x, m, m2):
    lo, hi = min(m, m2), max(m, m2)
    assert truncate(truncate(x, m), m) == truncate(x, m)
    assert truncate(truncate(x, hi), lo) == truncate(x, lo)


@given(badic_numbers(), st.integers(0, 12))
def test_truncation_bracket(x, m):
    t = to_rational(truncate(x, m))
    assert t <= to_rational(x) < t + Fraction(1, x.base**m)


@given(badic_numbers())
def test_valuation_range(x):
    v = valuation(x)
    allowed = {Fraction(0)} | {Fraction(1, x.base**j) for j in range(1, x.precision + 1)}
    assert v in allowed
    if x.value:
        assert v <= Fraction(1, x.base)
        # the valuation brackets the value from below: v <= x < b * v
        assert v <= x.value < x.base * v


@composite
def point_pairs(draw):
    b = draw(st.integers(2, 5))
    p = draw(st.integers(1, 6))
    coords = [draw(badic_numbers(b, p)) for _ in range(4)]
    return BAdicPoint(tuple(coords[:2])), BAdicPoint(tuple(coords[2:]))


@given(point_pairs())
def test_point_difference_valuation(pair):
    x, y = pair
    diff = point_sub(x, y)
    assert point_add(diff, y) == x
    lcp = lcp_lengths(x, y)
    p = x[0].precision
    if any(k == p for k in lcp):
        assert point_valuation(diff) == 0
    else:
        assert point_valuation(diff) == Fraction(1, x[0].base ** sum(k + 1 for k in lcp))

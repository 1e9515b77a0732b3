from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmcexact.badic import BAdicNumber, BAdicPoint, BaseMismatchError
from qmcexact.generators import (
    HaltonSpec, PointSet, copies_fixture, digital_shift_set, digital_unshift_set, from_csv,
    halton_point, halton_set, hammersley_net, num_digits, radical_inverse, radical_inverse_array,
    to_csv, to_digit_csv,
)
from qmcexact.netcheck import is_net

from strategies import dyadic_points


def test_radical_inverse_examples():
    assert radical_inverse(0, 2, 4).value == 0
    assert radical_inverse(3, 2, 2).value == Fraction(3, 4)
    assert radical_inverse(5, 3, 2).value == Fraction(7, 9)
    with pytest.raises(ValueError):
        radical_inverse(8, 2, 3)


def test_halton_point_examples():
    spec = HaltonSpec((2, 3))
    assert halton_point(0, spec, 3).value == (0, 0)
    assert halton_point(1, spec, 3).value == (Fraction(1, 2), Fraction(1, 3))
    assert halton_point(5, spec, 3).value == (Fraction(5, 8), Fraction(7, 9))


def test_halton_spec_validation():
    with pytest.raises(ValueError):
        HaltonSpec((2, 4))
    assert HaltonSpec((2, 3, 5)).B == 30


def test_hammersley_examples():
    assert hammersley_net(0).fractions() == [(0, 0)]
    assert hammersley_net(1).fractions() == [(0, 0), (Fraction(1, 2), Fraction(1, 2))]
    assert is_net(hammersley_net(3), 0, 3)
    assert is_net(hammersley_net(3, b=3), 0, 3)


def test_hammersley_points_distinct():
    pts = hammersley_net(6)
    assert len(set(pts.fractions())) == 64


def test_shift_examples():
    net = hammersley_net(4)
    zero = BAdicPoint.from_fractions((0, 0), 2, 6)
    assert digital_shift_set(net, zero) == net
    with pytest.raises(BaseMismatchError):
        digital_shift_set(net, BAdicPoint.from_fractions((0, 0), 3, 2))


@settings(max_examples=20, deadline=None)
@given(dyadic_points(6))
def test_shift_preserves_net_and_inverts(w):
    net = hammersley_net(4)
    shifted = digital_shift_set(net, w)
    assert is_net(shifted, 0, 4)
    assert digital_unshift_set(shifted, w) == net


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=5, max_size=5), st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_shift_base3_digitwise(d1, d2):
    net = hammersley_net(3, b=3)
    w = BAdicPoint((BAdicNumber(3, tuple(d1)), BAdicNumber(3, tuple(d2))))
    shifted = digital_shift_set(net, w)
    assert is_net(shifted, 0, 3)
    assert digital_unshift_set(shifted, w) == net


def test_copies_fixture():
    c = copies_fixture(4)
    assert len(c) == 16
    assert is_net(c, 1, 4)
    assert not is_net(c, 0, 4)
    with pytest.raises(NotImplementedError):
        copies_fixture(4, s=3)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_vectorised_radical_inverse_matches_scalar(n, b):
    p = max(num_digits(n, b), 1)
    arr = radical_inverse_array(np.array([n]), b, p)
    assert int(arr[0]) == radical_inverse(n, b, p).numerator


def test_halton_prefix_balance():
    # every b-adic box of a dividing shape holds N / (2^r1 3^r2) of the first N points
    spec = HaltonSpec((2, 3))
    N = 1728
    pts = halton_set(spec, N)
    for r1 in range(0, 7):
        for r2 in range(0, 4):
            q = 2**r1 * 3**r2
            if N % q:
                continue
            c1 = pts.numerators[:, 0] // 2 ** (pts.precision - r1)
            c2 = pts.numerators[:, 1] // 3 ** (pts.precision - r2)
            counts = np.bincount(c1 * 3**r2 + c2, minlength=q)
            assert (counts == N // q).all()


def test_csv_round_trip():
    pts = halton_set(HaltonSpec((2, 3)), 20)
    text = to_csv(pts)
    assert text.splitlines()[0] == "x1,x2"
    back = from_csv(text)
    assert back.fractions() == pts.fractions()
    assert to_digit_csv(pts).splitlines()[2] == "0.10000,0.10000"


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet((2, 2), 2, [[4, 0]])
    with pytest.raises(ValueError):
        PointSet.from_fractions([(Fraction(1, 3), 0)], (2, 2), 4)
    big = PointSet.from_fractions([(Fraction(1, 2**70), 0)], (2, 2), 70)
    assert big.numerators.dtype == object
    assert big.fractions()[0][0] == Fraction(1, 2**70)

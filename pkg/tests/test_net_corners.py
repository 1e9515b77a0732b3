from __future__ import annotations

from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from qmcexact.badic import BAdicPoint, truncate
from qmcexact.discrepancy import local_discrepancy
from qmcexact.generators import digital_shift_set, hammersley_net
from qmcexact.net_corners import (
    ConstraintError, CornerSpec, CornerBoundParams, delta_decomposition, dense_set_conditions,
    dense_set_parameters, corner_distance_ok, even_position_corner, index_partition, corner_bound,
    corner_bound_check, nearest_corner, partition_boxes, prescribed_net,
)

from strategies import dyadic_points

F = Fraction


def test_even_position_corner_examples():
    assert even_position_corner(4).value == (F(1, 4), F(1, 16))
    assert even_position_corner(8).value == (F(5, 16), F(5, 256))
    g = even_position_corner(12)
    assert g.index_sets == ((2, 4, 6), (8, 10, 12))
    for bad in (0, 3, 6):
        with pytest.raises(ValueError):
            even_position_corner(bad)


def test_corner_validation():
    with pytest.raises(ValueError):
        CornerSpec(2, 4, ((),), ((),))
    with pytest.raises(ValueError):
        CornerSpec(2, 4, ((5,),), ((1,),))
    with pytest.raises(ValueError):
        CornerSpec(3, 4, ((1,),), ((0,),))


def test_partition_m4_single_box():
    boxes = partition_boxes(even_position_corner(4))
    assert len(boxes) == 1
    assert boxes[0].box.order == 6
    assert boxes[0].g == (0, 0)


@st.composite
def corners(draw, b=None, s=2, m=None):
    b = draw(st.integers(2, 4)) if b is None else b
    m = draw(st.integers(2, 7)) if m is None else m
    sets, digits = [], []
    for _ in range(s):
        rs = draw(st.sets(st.integers(1, m), min_size=1, max_size=m))
        sets.append(tuple(sorted(rs)))
        digits.append(tuple(draw(st.integers(1, b - 1)) for _ in rs))
    return CornerSpec(b, m, tuple(sets), tuple(digits))


@settings(max_examples=60, deadline=None)
@given(corners())
def test_partition_is_exact(corner):
    boxes = partition_boxes(corner)
    assert sum(pb.box.volume for pb in boxes) == prod(corner.value)
    # disjoint: no two boxes share a cell at the finest common resolution
    seen = set()
    for pb in boxes:
        lo = tuple(x * corner.b**corner.m for x in pb.box.lower)
        assert lo not in seen
        seen.add(lo)
    if corner.b == 2:
        assert len(boxes) == prod(len(r) for r in corner.index_sets)


def test_index_partition_is_disjoint_cover():
    g = even_position_corner(12)
    part = index_partition(g)
    assert sorted(part.low + part.band + part.high) == sorted(part.indices)
    assert set(part.target) <= set(part.high)
    assert not part.band and len(part.target) == 3


@pytest.mark.parametrize("m", [4, 8, 12])
def test_even_corner_decomposition(m):
    g = even_position_corner(m)
    pts = prescribed_net(g)
    dec = delta_decomposition(pts, g)
    part = dec.partition
    assert dec.delta1 == 0 and dec.delta2 == 0
    assert dec.consistent and dec.a3_empty
    assert len(part.target) == m // 4
    # exact value: only the empty A3 boxes contribute
    assert dec.direct == -sum(F(1, 2 ** sum(r)) for r in part.high)
    assert dec.direct <= -F(m, 4) / 2 ** (m + 2)
    assert dec.delta3 <= -F(m, 4) / 2 ** (m + 2)
    assert dec.direct == local_discrepancy(pts, g.value).normalized


@settings(max_examples=30, deadline=None)
@given(corners(b=2, m=6), dyadic_points(8))
def test_decomposition_consistent_for_any_net(corner, w):
    pts = digital_shift_set(hammersley_net(corner.m), w)
    dec = delta_decomposition(pts, corner)
    assert dec.consistent
    assert dec.delta1 == 0  # boxes of order <= m hold exactly their share


@settings(max_examples=30, deadline=None)
@given(corners(b=2, m=6))
def test_a3_boxes_empty_when_net_contains_corner(corner):
    dec = delta_decomposition(prescribed_net(corner), corner)
    assert dec.a3_empty


def test_decomposition_requires_net():
    from qmcexact.generators import copies_fixture
    with pytest.raises(ValueError):
        delta_decomposition(copies_fixture(4), even_position_corner(4))


def test_corner_bound_even_corner():
    g = even_position_corner(8)
    res = corner_bound_check(prescribed_net(g), g, CornerBoundParams(2, F(4)))
    assert res.holds and res.a2_size == 0
    assert res.bound == -F(8, 2**8) * F(1, 16)


def test_corner_bound_diagnostics():
    g = even_position_corner(8)
    pts = prescribed_net(g)
    with pytest.raises(ConstraintError, match="alpha"):
        corner_bound_check(pts, g, CornerBoundParams(1, F(4)))
    with pytest.raises(ConstraintError, match="delta"):
        corner_bound_check(pts, g, CornerBoundParams(2, F(4), delta=F(1)))
    with pytest.raises(ConstraintError, match="A4"):
        corner_bound_check(pts, g, CornerBoundParams(2, F(1, 2)))
    with pytest.raises(ConstraintError, match="anchor"):
        corner_bound_check(hammersley_net(8), g, CornerBoundParams(2, F(4)))
    with pytest.raises(ValueError):
        CornerBoundParams(2, F(0))


def test_corner_bound_finite_band():
    g = even_position_corner(8)
    p = CornerBoundParams(2, F(4), delta=F(100))
    assert p.delta > p.delta_threshold(2, 2)
    res = corner_bound_check(prescribed_net(g), g, p)
    assert res.holds
    assert res.constant == F(1, 16) - F(1, 100) * F(1, 2)


def test_dense_set_params_and_limit_bound():
    p = CornerBoundParams.dense_set(2)
    assert (p.alpha, p.beta) == (2, 16)
    bound, _ = corner_bound(16, 2, 2, p)
    # delta -> oo: -(m^(s-1)/b^m) (b-1)^s (2s-3)^(s-1) / (b^s (4 s^2 (s-1)^2)^(s-1))
    assert bound == -F(16, 2**16) * F(1, 4 * 16)
    p3 = CornerBoundParams.dense_set(3)
    assert p3.beta == F((4 * 9 * 4) ** 2, 9)


def test_dense_set_parameters_s2_m16():
    assert dense_set_parameters(16, 2) == {"k": 4, "t0": 4, "mbar": 2}
    x = BAdicPoint.from_fractions((0, 0), 2, 16)
    g = nearest_corner(x, 16)
    assert g.index_sets == ((6, 8), (10, 12))
    assert corner_distance_ok(x, g)
    assert dense_set_conditions(g) == (0, 2, F(1))
    with pytest.raises(ValueError):
        nearest_corner(BAdicPoint.from_fractions((0, 0), 2, 8), 7)


@settings(max_examples=50, deadline=None)
@given(dyadic_points(20))
def test_nearest_corner_properties(x):
    m = 16
    g = nearest_corner(x, m)
    k = dense_set_parameters(m, 2)["k"]
    assert corner_distance_ok(x, g)
    for j in range(2):
        assert truncate(g.coordinate(j), k) == truncate(x[j], k)
    band, target, required = dense_set_conditions(g)
    assert band == 0 and target >= required


def test_distance_check_is_sharp():
    # ||x - corner|| < b sqrt(s) b^(-m/(2s(s-1))): for s=2, m=16 that is 2 sqrt(2) / 16
    g = nearest_corner(BAdicPoint.from_fractions((0, 0), 2, 16), 16)
    far = BAdicPoint.from_fractions((F(1, 2), F(1, 2)), 2, 16)
    assert not corner_distance_ok(far, g)


def test_corner_from_point():
    x = BAdicPoint.from_fractions((F(5, 16), F(5, 256)), 2, 8)
    assert CornerSpec.from_point(x, 8) == even_position_corner(8)

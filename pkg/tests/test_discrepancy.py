from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmcexact.discrepancy import (
    AnchoredBox, count_in_box, local_discrepancy, star_discrepancy_details, star_discrepancy_exact,
    star_discrepancy_oracle,
)
from qmcexact.errors import CapExceededError
from qmcexact.generators import HaltonSpec, halton_set, hammersley_net
from qmcexact.net_corners import even_position_corner, prescribed_net
from qmcexact.netcheck import ElementaryBox

from strategies import unit_rationals

F = Fraction


def test_count_examples():
    pts = hammersley_net(3)
    assert count_in_box(pts, (1, 1)) == 8
    assert count_in_box(pts, (0, F(1, 2))) == 0
    assert count_in_box(hammersley_net(2), (F(1, 2), F(1, 2))) == 1
    with pytest.raises(ValueError):
        count_in_box(pts, (1, 1, 1))


def test_count_sources_agree():
    spec = HaltonSpec((2, 3))
    pts = halton_set(spec, 100)
    box = AnchoredBox((F(3, 7), F(5, 11)))
    direct = sum(1 for x, y in pts.fractions() if x < box.upper[0] and y < box.upper[1])
    assert count_in_box(pts, box) == direct
    assert count_in_box(spec, box, length=100) == direct
    assert count_in_box(pts.fractions(), box) == direct
    # windows
    assert count_in_box(spec, box, start=30, length=50) == count_in_box(pts, box, start=30, length=50)


def test_count_elementary_box():
    pts = hammersley_net(4)
    box = ElementaryBox(2, (2, 2), (1, 3))
    assert count_in_box(pts, box) == 1
    assert count_in_box(list(pts), box) == 1


def test_local_discrepancy_examples():
    pts = hammersley_net(3)
    assert local_discrepancy(pts, (1, 1)).raw == 0
    assert local_discrepancy(pts, (0, 0)).raw == 0
    corner = even_position_corner(4)
    d = local_discrepancy(prescribed_net(corner), corner.value)
    assert d.normalized <= -F(1, 4) * 4 / 2**6
    assert d.normalized * d.N == d.raw


def test_window_additivity():
    spec = HaltonSpec((2, 3))
    y = (F(5, 12), F(7, 9))
    a, n = 17, 40
    win = local_discrepancy(spec, y, start=a, length=n).raw
    assert win == local_discrepancy(spec, y, length=a + n).raw - local_discrepancy(spec, y, length=a).raw


def test_star_examples():
    assert star_discrepancy_exact([(F(0), F(0))]) == 1
    assert star_discrepancy_exact([(F(1, 2), F(1, 2))]) == F(3, 4)
    assert star_discrepancy_oracle([(F(1, 2), F(1, 2))]) == F(3, 4)
    for m in range(1, 6):
        pts = hammersley_net(m)
        assert star_discrepancy_exact(pts) == star_discrepancy_oracle(pts)
    with pytest.raises(ValueError):
        star_discrepancy_exact([(F(0), F(0), F(0))])


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        star_discrepancy_oracle(hammersley_net(9))


def test_oracle_three_dimensions():
    pts = [(F(1, 2), F(1, 2), F(1, 2))]
    assert star_discrepancy_oracle(pts) == F(7, 8)


planar_sets = st.lists(st.tuples(unit_rationals(16), unit_rationals(16)), min_size=1, max_size=32)


@settings(max_examples=100, deadline=None)
@given(planar_sets)
def test_exact_equals_oracle(pts):
    assert star_discrepancy_exact(pts) == star_discrepancy_oracle(pts)


@settings(max_examples=60, deadline=None)
@given(planar_sets, unit_rationals(), unit_rationals())
def test_sup_dominates_probes(pts, y1, y2):
    d = local_discrepancy(pts, (y1, y2))
    assert abs(d.raw) <= d.N
    assert star_discrepancy_exact(pts) >= abs(d.normalized)


def test_details_report_corner():
    res = star_discrepancy_details([(F(1, 2), F(1, 2))])
    assert res.value == F(3, 4)
    assert res.kind in ("open", "closed")

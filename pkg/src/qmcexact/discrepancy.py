"""Local discrepancy and exact star discrepancy.

``Delta(y, P) = #{x in P : x in [0, y)} - N * vol([0, y))``. The star
discrepancy is the supremum of ``|Delta| / N`` over ``y``; it is computed
exactly from one-sided limits at the critical grid corners.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .badic import BAdicPoint
from .errors import CapExceededError
from .generators import HaltonSpec, PointSet, num_digits, radical_inverse_array
from .netcheck import ElementaryBox, count_in_elementary_box

DEFAULT_ORACLE_CAP = 256


@dataclass(frozen=True)
class AnchoredBox:
    """``[0, y_1) x ... x [0, y_s)`` with rational ``y_j`` in ``[0, 1]``."""

    upper: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ys = tuple(Fraction(y) for y in self.upper)
        if not ys:
            raise ValueError("empty corner")
        if any(not 0 <= y <= 1 for y in ys):
            raise ValueError(f"corner {ys} outside [0, 1]^s")
        object.__setattr__(self, "upper", ys)

    @property
    def s(self) -> int:
        return len(self.upper)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.upper, start=Fraction(1))


@dataclass(frozen=True)
class DiscrepancyValue:
    raw: Fraction
    N: int

    @property
    def normalized(self) -> Fraction:
        return self.raw / self.N if self.N else Fraction(0)


def _as_box(box) -> AnchoredBox | ElementaryBox:
    if isinstance(box, (AnchoredBox, ElementaryBox)):
        return box
    return AnchoredBox(tuple(box))


def _coords(x) -> tuple[Fraction, ...]:
    if isinstance(x, BAdicPoint):
        return x.value
    return tuple(Fraction(v) for v in x)


def halton_membership(
    spec: HaltonSpec, upper: Sequence[Fraction], ns: np.ndarray
) -> np.ndarray:
    """Boolean mask ``H_s(n) in [0, upper)`` for every index in ``ns`` (exact)."""
    ns = np.asarray(ns, dtype=np.int64)
    mask = np.ones(len(ns), dtype=bool)
    top = int(ns.max()) if len(ns) else 0
    for b, y in zip(spec.bases, upper):
        y = Fraction(y)
        p = max(num_digits(top, b), 1)
        # phi_b(n) = rev / b**p < y  <=>  rev < ceil(y * b**p)
        limit = -((-y.numerator * b**p) // y.denominator)
        mask &= radical_inverse_array(ns, b, p) < limit
    return mask


def count_in_box(points, box, start: int = 0, length: int | None = None) -> int:
    """Number of points ``x`` with ``lower <= x < upper`` in every coordinate.

    ``points`` is a :class:`PointSet`, a :class:`HaltonSpec` (the infinite
    sequence, so ``length`` is required) or any iterable of points. ``start``
    and ``length`` select a window of the ordered points.
    """
    box = _as_box(box)
    if isinstance(points, HaltonSpec):
        if length is None:
            raise ValueError("a Halton stream needs an explicit window length")
        if box.s != points.s:
            raise ValueError(f"dimension {box.s} vs {points.s}")
        if isinstance(box, ElementaryBox):
            raise TypeError("elementary boxes need a single-base point set")
        ns = np.arange(start, start + length, dtype=np.int64)
        return int(halton_membership(points, box.upper, ns).sum())
    if isinstance(points, PointSet):
        if start or length is not None:
            stop = len(points) if length is None else start + length
            points = PointSet(points.bases, points.precision, points.numerators[start:stop])
        if box.s != points.s:
            raise ValueError(f"dimension {box.s} vs {points.s}")
        if isinstance(box, ElementaryBox):
            return count_in_elementary_box(points, box)
        mask = np.ones(len(points), dtype=bool)
        for j, (y, q) in enumerate(zip(box.upper, points.scales)):
            limit = -((-y.numerator * q) // y.denominator)
            mask &= points.numerators[:, j] < limit
        return int(mask.sum())
    rows = list(points)[start:None if length is None else start + length]
    lower = box.lower if isinstance(box, ElementaryBox) else (Fraction(0),) * box.s
    upper = box.upper
    count = 0
    for x in rows:
        c = _coords(x)
        if len(c) != box.s:
            raise ValueError(f"dimension {box.s} vs {len(c)}")
        count += all(lo <= v < hi for lo, v, hi in zip(lower, c, upper))
    return count


def _size(points, length: int | None) -> int:
    if length is not None:
        return length
    if isinstance(points, HaltonSpec):
        raise ValueError("a Halton stream needs an explicit window length")
    return len(points) if hasattr(points, "__len__") else len(list(points))


def local_discrepancy(points, box, start: int = 0, length: int | None = None) -> DiscrepancyValue:
    """``Delta = count - N * vol`` for the anchored box (exact)."""
    box = _as_box(box)
    if not isinstance(points, (PointSet, HaltonSpec)):
        points = list(points)
    n = _size(points, length)
    if length is None and start:
        n -= start
    return DiscrepancyValue(count_in_box(points, box, start, length) - n * box.volume, n)


@dataclass(frozen=True)
class StarDiscrepancy:
    value: Fraction
    corner: tuple[Fraction, ...]
    kind: str  # "open": vol - count(<); "closed": count(<=) - vol


def star_discrepancy_details(points: PointSet | Iterable) -> StarDiscrepancy:
    """Exact 2-D star discrepancy by a sweep over the critical grid."""
    rows = points.fractions() if isinstance(points, PointSet) else [_coords(x) for x in points]
    if not rows:
        raise ValueError("empty point set")
    if len(rows[0]) != 2:
        raise ValueError(f"exact sweep supports s = 2, got s = {len(rows[0])}")
    n = len(rows)
    grid1 = sorted({x for x, _ in rows} | {Fraction(1)})
    grid2 = sorted({y for _, y in rows} | {Fraction(1)})
    by_x = sorted(rows)
    below: list[Fraction] = []  # second coordinates of points with x1 < y1
    upto: list[Fraction] = []  # ... with x1 <= y1
    i_open = i_closed = 0
    best = StarDiscrepancy(Fraction(-1), (Fraction(0), Fraction(0)), "open")
    for y1 in grid1:
        while i_open < n and by_x[i_open][0] < y1:
            insort(below, by_x[i_open][1])
            i_open += 1
        while i_closed < n and by_x[i_closed][0] <= y1:
            insort(upto, by_x[i_closed][1])
            i_closed += 1
        for y2 in grid2:
            vol = y1 * y2
            gap = vol - Fraction(bisect_left(below, y2), n)
            excess = Fraction(bisect_right(upto, y2), n) - vol
            if gap > best.value:
                best = StarDiscrepancy(gap, (y1, y2), "open")
            if excess > best.value:
                best = StarDiscrepancy(excess, (y1, y2), "closed")
    return best


def star_discrepancy_exact(points: PointSet | Iterable) -> Fraction:
    """``sup_y |Delta(y)| / N`` for a 2-D point set, as an exact rational."""
    return star_discrepancy_details(points).value


def star_discrepancy_oracle(points: PointSet | Iterable, cap: int = DEFAULT_ORACLE_CAP) -> Fraction:
    """Brute-force ``D*`` for any dimension.

    Every corner of the grid ``{coordinates} u {0, 1}`` is evaluated with all
    ``2**s`` mixes of strict and non-strict comparisons, each count checked
    point by point.
    """
    rows = points.fractions() if isinstance(points, PointSet) else [_coords(x) for x in points]
    n = len(rows)
    if n == 0:
        raise ValueError("empty point set")
    if n > cap:
        raise CapExceededError(f"oracle limited to {cap} points, got {n}")
    s = len(rows[0])
    grids = [sorted({r[j] for r in rows} | {Fraction(0), Fraction(1)}) for j in range(s)]
    best = Fraction(0)
    for corner in product(*grids):
        vol = math.prod(corner, start=Fraction(1))
        for closed in product((False, True), repeat=s):
            count = 0
            for r in rows:
                inside = True
                for v, y, c in zip(r, corner, closed):
                    if (v > y) if c else (v >= y):
                        inside = False
                        break
                count += inside
            best = max(best, abs(Fraction(count, n) - vol))
    return best

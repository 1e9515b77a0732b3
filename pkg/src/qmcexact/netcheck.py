"""Exhaustive (t, m, s)-net and d-admissibility checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

import numpy as np

from .generators import PointSet


@dataclass(frozen=True)
class ElementaryBox:
    """``prod_i [a_i / b**d_i, (a_i + 1) / b**d_i)``."""

    base: int
    orders: tuple[int, ...]
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(self.orders))
        object.__setattr__(self, "indices", tuple(self.indices))
        if len(self.orders) != len(self.indices):
            raise ValueError("orders and indices differ in length")
        for d, a in zip(self.orders, self.indices):
            if d < 0 or not 0 <= a < self.base**d:
                raise ValueError(f"index {a} invalid for order {d} in base {self.base}")

    @property
    def s(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return sum(self.orders)

    @property
    def volume(self) -> Fraction:
        return Fraction(1, self.base**self.order)

    @property
    def lower(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.base**d) for d, a in zip(self.orders, self.indices))

    @property
    def upper(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a + 1, self.base**d) for d, a in zip(self.orders, self.indices))

    def contains(self, x) -> bool:
        return all(lo <= v < hi for lo, v, hi in zip(self.lower, x, self.upper))


@dataclass(frozen=True)
class NetVerdict:
    is_net: bool
    witness: ElementaryBox | None = None
    witness_count: int | None = None

    def __post_init__(self) -> None:
        if self.is_net != (self.witness is None):
            raise ValueError("a witness is present exactly when the check fails")

    def __bool__(self) -> bool:
        return self.is_net


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ``(d_1..d_parts)`` of non-negative integers summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _prefixes(points: PointSet, j: int, d: int) -> np.ndarray:
    """First ``d`` digits of coordinate ``j`` as an integer."""
    return points.numerators[:, j] // points.bases[j] ** (points.precision - d)


def cell_counts(points: PointSet, orders: tuple[int, ...]) -> np.ndarray:
    """Point counts of every box of shape ``orders``, indexed lexicographically by ``(a_1..a_s)``."""
    b = points.base
    if any(d > points.precision for d in orders):
        raise ValueError(f"box order exceeds point precision {points.precision}")
    idx = np.zeros(len(points), dtype=np.int64)
    for j, d in enumerate(orders):
        idx = idx * b**d + _prefixes(points, j, d).astype(np.int64)
    return np.bincount(idx, minlength=b ** sum(orders))


def is_net(points: PointSet, t: int, m: int, s: int | None = None, b: int | None = None) -> NetVerdict:
    """Check that every elementary box of volume ``b**(t-m)`` holds exactly ``b**t`` points."""
    s = points.s if s is None else s
    b = points.base if b is None else b
    if points.s != s or points.base != b:
        raise ValueError(f"point set is ({points.s}-dim, base {points.base}), asked ({s}, {b})")
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    if len(points) != b**m:
        raise ValueError(f"a net needs {b**m} points, got {len(points)}")
    target = b**t
    for orders in compositions(m - t, s):
        counts = cell_counts(points, orders)
        bad = np.flatnonzero(counts != target)
        if bad.size:
            flat = int(bad[0])
            indices = []
            for d in reversed(orders):
                flat, a = divmod(flat, b**d)
                indices.append(a)
            box = ElementaryBox(b, orders, tuple(reversed(indices)))
            return NetVerdict(False, box, int(counts[bad[0]]))
    return NetVerdict(True)


def count_in_elementary_box(points: PointSet, box: ElementaryBox) -> int:
    """Direct count by per-coordinate digit prefixes."""
    if box.s != points.s or box.base != points.base:
        raise ValueError("box and point set disagree in dimension or base")
    mask = np.ones(len(points), dtype=bool)
    for j, (d, a) in enumerate(zip(box.orders, box.indices)):
        if d > points.precision:
            # Finer than the stored digits: only points whose trailing digits match zero-padding.
            scaled = points.numerators[:, j] * box.base ** (d - points.precision)
            mask &= scaled == a
        else:
            mask &= _prefixes(points, j, d) == a
    return int(mask.sum())


def _pair_exponents(points: PointSet, block: int = 512) -> int | None:
    """Max over pairs ``k < n`` of ``sum_j (lcp_j + 1)``.

    ``point_valuation(x_n (-) x_k) == b**-(sum_j (lcp_j + 1))`` where
    ``lcp_j`` is the common-prefix length of coordinate ``j``. Returns
    ``None`` as soon as two points coincide in some coordinate to full
    precision (valuation 0). Rows are processed in blocks against all later
    points.
    """
    p, n = points.precision, len(points)
    prefixes = [[_prefixes(points, j, i) for i in range(1, p + 1)] for j in range(points.s)]
    best = 0
    for lo in range(0, n - 1, block):
        hi = min(lo + block, n - 1)
        rows = np.arange(lo, hi)[:, None]
        later = np.arange(n)[None, :] > rows  # pairs (k, n) with k < n
        total = np.zeros((hi - lo, n), dtype=np.int64)
        for j in range(points.s):
            lcp = np.zeros((hi - lo, n), dtype=np.int64)
            alive = later.copy()
            for col in prefixes[j]:
                alive &= col[lo:hi, None] == col[None, :]
                if not alive.any():
                    break
                lcp += alive
            if (later & (lcp == p)).any():
                return None
            total += lcp + 1
        best = max(best, int(total[later].max()))
    return best


def min_pairwise_valuation(points: PointSet) -> Fraction:
    """``min_{k < n} ||x_n (-) x_k||_b``; 0 if some pair agrees in a full coordinate."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    b = points.base
    exponent = _pair_exponents(points)
    if exponent is None:
        return Fraction(0)
    return Fraction(1, b**exponent)


def admissibility_level(points: PointSet, m: int, min_valuation: Fraction | None = None) -> int | None:
    """Least ``d`` with ``min_pairwise_valuation > b**-(m+d)``; ``None`` if no ``d`` works."""
    b = points.base
    if len(points) != b**m:
        raise ValueError(f"expected {b**m} points, got {len(points)}")
    v = min_pairwise_valuation(points) if min_valuation is None else min_valuation
    if v == 0:
        return None
    e, q = 0, v.denominator
    while q % b == 0:
        q //= b
        e += 1
    if q != 1 or v.numerator != 1:
        raise ValueError(f"{v} is not a power of 1/{b}")
    # v = b**-e > b**-(m+d)  <=>  d > e - m
    return e - m + 1


def is_admissible(points: PointSet, m: int, d: int) -> bool:
    level = admissibility_level(points, m)
    return level is not None and d >= level


def brute_force_is_net(points: PointSet, t: int, m: int) -> bool:
    """Definition-level check: enumerate every box and count with rationals."""
    b, s = points.base, points.s
    rows = points.fractions()
    for orders in compositions(m - t, s):
        for idx in product(*(range(b**d) for d in orders)):
            box = ElementaryBox(b, orders, idx)
            if sum(box.contains(x) for x in rows) != b**t:
                return False
    return True

"""Lower-bound test boxes for (0, m, s)-nets.

A test corner ``c`` has coordinates ``c_j = sum_{r in R_j} a_r b**-r``. The
box ``[0, c)`` splits into elementary boxes ``J_{r,g}`` indexed by
``r in R_1 x ... x R_s`` and grouped by ``sum(r)``. Boxes of order at most m
are filled fairly by any net. Boxes of order at least ``m + s`` are empty when
the net contains a point close to ``c``, which forces a negative discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .badic import BAdicNumber, BAdicPoint
from .discrepancy import AnchoredBox, local_discrepancy
from .generators import PointSet, digital_shift_set, hammersley_net
from .netcheck import ElementaryBox, count_in_elementary_box, is_net


@dataclass(frozen=True)
class CornerSpec:
    """Corner with coordinates ``c_j = sum_{r in R_j} a_r^(j) b**-r`` for ``j = 1..s``.

    ``index_sets[j]`` is ``R_j`` (sorted) and ``digits[j][i]`` is the digit at
    position ``index_sets[j][i]``.
    """

    b: int
    m: int
    index_sets: tuple[tuple[int, ...], ...]
    digits: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        sets = tuple(tuple(sorted(r)) for r in self.index_sets)
        digits = tuple(tuple(d) for d in self.digits)
        if len(sets) != len(digits):
            raise ValueError("one digit tuple per index set")
        for rs, ds in zip(sets, digits):
            if not rs:
                raise ValueError("index sets must be non-empty")
            if len(rs) != len(ds) or len(set(rs)) != len(rs):
                raise ValueError(f"index set {rs} and digits {ds} do not align")
            if rs[0] < 1 or rs[-1] > self.m:
                raise ValueError(f"index set {rs} outside 1..{self.m}")
            if any(not 1 <= d < self.b for d in ds):
                raise ValueError(f"digits {ds} must lie in 1..{self.b - 1}")
        object.__setattr__(self, "index_sets", sets)
        object.__setattr__(self, "digits", digits)

    @classmethod
    def ones(cls, b: int, m: int, index_sets) -> CornerSpec:
        return cls(b, m, index_sets, tuple((1,) * len(r) for r in index_sets))

    @classmethod
    def from_point(cls, x: BAdicPoint, m: int) -> CornerSpec:
        """Corner with the nonzero digits of ``x`` among positions ``1..m``."""
        b = x.coords[0].base
        sets, digits = [], []
        for c in x:
            if c.base != b:
                raise ValueError("corner must use a single base")
            rs = [r for r in range(1, m + 1) if c.digit(r)]
            sets.append(tuple(rs))
            digits.append(tuple(c.digit(r) for r in rs))
        return cls(b, m, tuple(sets), tuple(digits))

    @property
    def s(self) -> int:
        return len(self.index_sets)

    def digit(self, j: int, r: int) -> int:
        """Digit of ``corner^(j)`` at position ``r`` (0 when ``r`` is not in ``R_j``)."""
        try:
            return self.digits[j][self.index_sets[j].index(r)]
        except ValueError:
            return 0

    def coordinate(self, j: int) -> BAdicNumber:
        return BAdicNumber(self.b, tuple(self.digit(j, r) for r in range(1, self.m + 1)))

    @property
    def point(self) -> BAdicPoint:
        return BAdicPoint(tuple(self.coordinate(j) for j in range(self.s)))

    @property
    def value(self) -> tuple[Fraction, ...]:
        return self.point.value


@dataclass(frozen=True)
class IndexPartition:
    """Index vectors ``r`` grouped by ``sum(r)`` relative to ``m``."""

    indices: tuple[tuple[int, ...], ...]
    low: tuple[tuple[int, ...], ...]  # sum <= m
    band: tuple[tuple[int, ...], ...]  # m < sum < m + s
    high: tuple[tuple[int, ...], ...]  # sum >= m + s
    target: tuple[tuple[int, ...], ...]  # sum == m + alpha


def index_partition(corner: CornerSpec, alpha: int | None = None) -> IndexPartition:
    m, s = corner.m, corner.s
    alpha = s if alpha is None else alpha
    indices = tuple(product(*corner.index_sets))
    return IndexPartition(
        indices=indices,
        low=tuple(r for r in indices if sum(r) <= m),
        band=tuple(r for r in indices if m < sum(r) < m + s),
        high=tuple(r for r in indices if sum(r) >= m + s),
        target=tuple(r for r in indices if sum(r) == m + alpha),
    )


@dataclass(frozen=True)
class CornerBoundParams:
    """``alpha`` integer >= s; ``beta`` > 0; ``delta`` > 0 or ``None`` for the limit delta -> oo."""

    alpha: int
    beta: Fraction
    delta: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
        if self.beta <= 0 or (self.delta is not None and self.delta <= 0):
            raise ValueError("beta and delta must be positive")

    def delta_threshold(self, b: int, s: int) -> Fraction:
        """``delta`` must exceed ``b**alpha (b**(s-1) - 1) beta / b**(s-1)``."""
        return Fraction(b**self.alpha * (b ** (s - 1) - 1)) * self.beta / b ** (s - 1)

    @classmethod
    def dense_set(cls, s: int, delta: Fraction | None = None) -> CornerBoundParams:
        """Parameters met by every corner of the dense family: ``alpha = s``,
        ``beta = (4 s^2 (s-1)^2)^(s-1) / (2s-3)^(s-1)``."""
        beta = Fraction((4 * s * s * (s - 1) ** 2) ** (s - 1), (2 * s - 3) ** (s - 1))
        return cls(s, beta, delta)


def even_position_corner(m: int) -> CornerSpec:
    """The base-2 corner with ones at even positions ``2..m/2`` and ``m/2+2..m``."""
    if m < 4 or m % 4:
        raise ValueError(f"m must be a positive multiple of 4, got {m}")
    return CornerSpec.ones(2, m, (
        tuple(range(2, m // 2 + 1, 2)),
        tuple(range(m // 2 + 2, m + 1, 2)),
    ))


@dataclass(frozen=True)
class PartitionBox:
    r: tuple[int, ...]
    g: tuple[int, ...]
    box: ElementaryBox


def partition_boxes(corner: CornerSpec) -> list[PartitionBox]:
    """Disjoint elementary boxes ``J_{r,g}`` whose union is ``[0, corner)``.

    ``J_{r,g} = prod_j [[c_j]_{r_j-1} + g_j b**-r_j, [c_j]_{r_j-1} + (g_j+1) b**-r_j)``
    with ``0 <= g_j < a_{r_j}^(j)``.
    """
    b = corner.b
    prefix = []  # prefix[j][r] = b**r * [c_j]_{r-1}
    for j in range(corner.s):
        coord = corner.coordinate(j)
        table = {}
        acc = 0
        for r in range(1, corner.m + 1):
            table[r] = acc * b  # digits 1..r-1 scaled to b**r
            acc = acc * b + coord.digit(r)
        prefix.append(table)
    out = []
    for r in product(*corner.index_sets):
        ranges = [range(corner.digit(j, rj)) for j, rj in enumerate(r)]
        for g in product(*ranges):
            idx = tuple(prefix[j][rj] + gj for j, (rj, gj) in enumerate(zip(r, g)))
            out.append(PartitionBox(r, g, ElementaryBox(b, r, idx)))
    return out


@dataclass
class DeltaDecomposition:
    delta1: Fraction
    delta2: Fraction
    delta3: Fraction
    direct: Fraction  # local discrepancy at corner, divided by N
    partition: IndexPartition
    counts: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = field(repr=False)

    @property
    def total(self) -> Fraction:
        return self.delta1 + self.delta2 + self.delta3

    @property
    def consistent(self) -> bool:
        return self.total == self.direct

    @property
    def a3_empty(self) -> bool:
        a3 = set(self.partition.high)
        return all(c == 0 for (r, _), c in self.counts.items() if r in a3)


def delta_decomposition(
    points: PointSet, corner: CornerSpec, alpha: int | None = None, verify_net: bool = True
) -> DeltaDecomposition:
    """Split ``Delta(corner)/N`` over the three index groups and cross-check the total."""
    b, m = corner.b, corner.m
    if points.s != corner.s or points.base != b:
        raise ValueError("point set and corner disagree in dimension or base")
    if verify_net:
        verdict = is_net(points, 0, m)
        if not verdict:
            raise ValueError(f"not a (0,{m},{corner.s})-net: box {verdict.witness} holds {verdict.witness_count}")
    part = index_partition(corner, alpha)
    a1, a2 = set(part.low), set(part.band)
    n = len(points)
    sums = [Fraction(0)] * 3
    counts = {}
    for pb in partition_boxes(corner):
        c = count_in_elementary_box(points, pb.box)
        counts[(pb.r, pb.g)] = c
        term = Fraction(c, n) - pb.box.volume
        sums[0 if pb.r in a1 else 1 if pb.r in a2 else 2] += term
    direct = local_discrepancy(points, AnchoredBox(corner.value)).normalized
    return DeltaDecomposition(sums[0], sums[1], sums[2], direct, part, counts)


def prescribed_net(corner: CornerSpec) -> PointSet:
    """A (0, m, 2)-net in base ``b`` whose first point is ``corner``.

    The Hammersley net starts at the origin, so shifting it digitally by
    ``corner`` moves that point onto ``corner``.
    """
    if corner.s != 2:
        raise NotImplementedError("net source available for s = 2 only")
    return digital_shift_set(hammersley_net(corner.m, corner.b), corner.point)


class ConstraintError(ValueError):
    """A precondition of the corner bound does not hold."""


@dataclass(frozen=True)
class CornerBoundResult:
    delta_over_n: Fraction
    bound: Fraction
    constant: Fraction
    holds: bool
    a2_size: int
    a4_size: int
    anchor_index: int


def corner_bound(m: int, s: int, b: int, params: CornerBoundParams) -> tuple[Fraction, Fraction]:
    """``(bound, constant)`` with ``bound = -(m**(s-1) / b**m) * constant``.

    ``constant = -(b-1)**s / delta * (b**(s-1) - 1) / b**(s-1) + (b-1)**s / (beta b**alpha)``;
    the first term vanishes when ``delta`` is ``None``.
    """
    c = Fraction((b - 1) ** s) / (params.beta * b**params.alpha)
    if params.delta is not None:
        c -= Fraction((b - 1) ** s) / params.delta * Fraction(b ** (s - 1) - 1, b ** (s - 1))
    return -Fraction(m ** (s - 1), b**m) * c, c


def _anchor_index(points: PointSet, corner: CornerSpec) -> int | None:
    """Index of a point in ``prod_j [c_j, c_j + b**-max(R_j))``, if any."""
    mask = np.ones(len(points), dtype=bool)
    for j, (rs, q) in enumerate(zip(corner.index_sets, points.scales)):
        g = corner.coordinate(j).value
        lo = g * q
        hi = (g + Fraction(1, corner.b ** rs[-1])) * q
        col = points.numerators[:, j]
        mask &= (col >= math.ceil(lo)) & (col < math.ceil(hi))
    hits = np.flatnonzero(mask)
    return int(hits[0]) if hits.size else None


def corner_bound_check(
    points: PointSet, corner: CornerSpec, params: CornerBoundParams, verify_net: bool = True
) -> CornerBoundResult:
    """Check the hypotheses and the discrepancy bound at ``corner``.

    Raises :class:`ConstraintError` naming the first failed hypothesis.
    """
    m, s, b = corner.m, corner.s, corner.b
    if params.alpha < s:
        raise ConstraintError(f"alpha = {params.alpha} must be >= s = {s}")
    anchor = _anchor_index(points, corner)
    if anchor is None:
        raise ConstraintError("no point of the net lies in the anchor box next to corner")
    part = index_partition(corner, params.alpha)
    quota = Fraction(m ** (s - 1))
    if params.delta is None:
        if part.band:
            raise ConstraintError(f"|A2| = {len(part.band)} must be 0 in the delta -> oo limit")
    else:
        if params.delta <= params.delta_threshold(b, s):
            raise ConstraintError(f"delta = {params.delta} must exceed {params.delta_threshold(b, s)}")
        if len(part.band) > quota / params.delta:
            raise ConstraintError(f"|A2| = {len(part.band)} exceeds m^(s-1)/delta = {quota / params.delta}")
    if len(part.target) < quota / params.beta:
        raise ConstraintError(f"|A4| = {len(part.target)} below m^(s-1)/beta = {quota / params.beta}")
    bound, constant = corner_bound(m, s, b, params)
    if constant <= 0:
        raise ConstraintError(f"bound constant {constant} is not positive")
    dec = delta_decomposition(points, corner, params.alpha, verify_net=verify_net)
    if not dec.consistent:
        raise AssertionError("decomposition disagrees with the direct local discrepancy")
    return CornerBoundResult(dec.direct, bound, constant, dec.direct <= bound,
                         len(part.band), len(part.target), anchor)


def dense_set_parameters(m: int, s: int) -> dict[str, int]:
    """Integer parameters of the dense corner family, keyed by name."""
    k = m // (2 * (s - 1) * s)
    mbar = (m * (2 * s - 3)) // (2 * s * s * (s - 1))
    return {"k": k, "t0": k, "mbar": mbar}


def nearest_corner(x: BAdicPoint, m: int) -> CornerSpec:
    """A dense-family corner sharing the first ``k = [m / (2 s (s-1))]`` digits with ``x``.

    ``R_i`` keeps the nonzero digit positions of ``x`` up to ``k`` (digits
    copied) and adds the tail positions ``T_i`` with digit 1.
    """
    s = x.s
    b = x.coords[0].base
    if any(c.base != b for c in x):
        raise ValueError("x must use a single base")
    if s < 2:
        raise ValueError("need s >= 2")
    if m < 2 * s**s * (s - 1) ** s:
        raise ValueError(f"m = {m} below 2 s^s (s-1)^s = {2 * s**s * (s - 1) ** s}")
    p = dense_set_parameters(m, s)
    k, t0, mbar = p["k"], p["t0"], p["mbar"]
    index_sets, digits = [], []
    for i, coord in enumerate(x):
        head = [r for r in range(1, k + 1) if coord.digit(r)]
        if i < s - 1:
            tail = [t0 + s * j for j in range(1, mbar + 1)]
        else:
            tail = [m - (s - 1) * (t0 + s * mbar) + s * j for j in range(1, mbar + 1)]
        index_sets.append(tuple(head + tail))
        digits.append(tuple([coord.digit(r) for r in head] + [1] * len(tail)))
    return CornerSpec(b, m, tuple(index_sets), tuple(digits))


def corner_distance_ok(x: BAdicPoint, corner: CornerSpec) -> bool:
    """Exact check of ``||x - corner||_2 < b sqrt(s) b**(-m / (2 (s-1) s))``.

    Both sides are raised to the power ``2 s (s-1)`` so the comparison stays
    rational.
    """
    s, b, m = corner.s, corner.b, corner.m
    d2 = sum((a - g) ** 2 for a, g in zip(x.value, corner.value))
    q = s * (s - 1)
    return (d2 / (b * b * s)) ** q * b**m < 1


def dense_set_conditions(corner: CornerSpec) -> tuple[int, int, Fraction]:
    """``(|band|, |sum == m+s|, required)`` for the dense-family membership test."""
    m, s = corner.m, corner.s
    part = index_partition(corner, s)
    required = Fraction(m ** (s - 1) * (2 * s - 3) ** (s - 1), (4 * s * s * (s - 1) ** 2) ** (s - 1))
    return len(part.band), len(part.target), required

"""Halton points, Hammersley nets and the transformations applied to them.

A :class:`PointSet` keeps each coordinate as an integer numerator over
``base**precision``. Comparisons against b-adic boundaries then reduce to
integer arithmetic, which stays exact (numpy ``int64`` when it fits, Python
``int`` objects otherwise).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .badic import BAdicNumber, BAdicPoint, BaseMismatchError, format_rational, parse_rational

_INT64_LIMIT = 2**62


def _dtype_for(bases: Sequence[int], precision: int):
    return np.int64 if max(bases) ** precision < _INT64_LIMIT else object


class PointSet:
    """Ordered multiset of points in ``[0, 1)^s`` with per-coordinate bases."""

    __slots__ = ("bases", "precision", "numerators")

    def __init__(self, bases: Sequence[int], precision: int, numerators) -> None:
        self.bases = tuple(int(b) for b in bases)
        self.precision = int(precision)
        if any(b < 2 for b in self.bases) or not self.bases:
            raise ValueError(f"invalid bases {self.bases}")
        arr = np.asarray(numerators, dtype=_dtype_for(self.bases, self.precision))
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, len(self.bases))
        if arr.ndim != 2 or arr.shape[1] != len(self.bases):
            raise ValueError(f"numerators must have shape (N, {len(self.bases)})")
        for j, b in enumerate(self.bases):
            col = arr[:, j]
            if len(col) and (col.min() < 0 or col.max() >= b**self.precision):
                raise ValueError(f"coordinate {j} outside [0, 1) at precision {self.precision}")
        arr.setflags(write=False)
        self.numerators = arr

    @classmethod
    def from_points(cls, points: Iterable[BAdicPoint], precision: int | None = None) -> PointSet:
        points = list(points)
        if not points:
            raise ValueError("cannot infer bases from an empty point list")
        bases = points[0].bases
        p = max(c.precision for pt in points for c in pt) if precision is None else precision
        rows = []
        for pt in points:
            if pt.bases != bases:
                raise BaseMismatchError(f"point bases {pt.bases} differ from {bases}")
            if any(c.precision > p for c in pt):
                raise ValueError(f"point {pt} needs more than {p} digits")
            rows.append([c.padded(p).numerator for c in pt])
        return cls(bases, p, rows)

    @classmethod
    def from_fractions(
        cls, rows: Iterable[Sequence[Fraction | int]], bases: Sequence[int], precision: int
    ) -> PointSet:
        """Exact construction; raises if a value needs more than ``precision`` digits."""
        out = []
        for row in rows:
            nums = []
            for x, b in zip(row, bases):
                scaled = Fraction(x) * b**precision
                if scaled.denominator != 1:
                    raise ValueError(f"{x} has no {precision}-digit expansion in base {b}")
                nums.append(int(scaled))
            out.append(nums)
        return cls(bases, precision, out)

    @property
    def s(self) -> int:
        return len(self.bases)

    @property
    def base(self) -> int:
        """The common base; raises for mixed-base sets."""
        if len(set(self.bases)) != 1:
            raise BaseMismatchError(f"mixed bases {self.bases}")
        return self.bases[0]

    @property
    def scales(self) -> tuple[int, ...]:
        return tuple(b**self.precision for b in self.bases)

    def __len__(self) -> int:
        return self.numerators.shape[0]

    def point(self, n: int) -> BAdicPoint:
        return BAdicPoint(tuple(
            BAdicNumber.from_numerator(int(v), b, self.precision)
            for v, b in zip(self.numerators[n], self.bases)
        ))

    def __iter__(self) -> Iterator[BAdicPoint]:
        return (self.point(n) for n in range(len(self)))

    def fractions(self) -> list[tuple[Fraction, ...]]:
        scales = self.scales
        return [tuple(Fraction(int(v), q) for v, q in zip(row, scales)) for row in self.numerators]

    def with_precision(self, precision: int) -> PointSet:
        if precision < self.precision:
            raise ValueError("cannot reduce precision")
        dtype = _dtype_for(self.bases, precision)
        factors = np.array([b ** (precision - self.precision) for b in self.bases], dtype=dtype)
        return PointSet(self.bases, precision, self.numerators.astype(dtype) * factors)

    def digit_array(self) -> np.ndarray:
        """Digits as an ``(N, s, P)`` array, most significant first."""
        n, s, p = len(self), self.s, self.precision
        out = np.zeros((n, s, p), dtype=np.int64)
        for j, b in enumerate(self.bases):
            col = self.numerators[:, j].copy()
            for i in range(p - 1, -1, -1):
                out[:, j, i] = (col % b).astype(np.int64)
                col = col // b
        return out

    @classmethod
    def from_digit_array(cls, bases: Sequence[int], digits: np.ndarray) -> PointSet:
        n, s, p = digits.shape
        dtype = _dtype_for(bases, p)
        nums = np.zeros((n, s), dtype=dtype)
        for j, b in enumerate(bases):
            col = np.zeros(n, dtype=dtype)
            for i in range(p):
                col = col * b + digits[:, j, i].astype(dtype)
            nums[:, j] = col
        return cls(bases, p, nums)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        if self.bases != other.bases or len(self) != len(other):
            return False
        p = max(self.precision, other.precision)
        a = self if self.precision == p else self.with_precision(p)
        c = other if other.precision == p else other.with_precision(p)
        return bool(np.array_equal(a.numerators, c.numerators))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PointSet(N={len(self)}, bases={self.bases}, precision={self.precision})"


@dataclass(frozen=True)
class HaltonSpec:
    """Pairwise coprime Halton bases ``b_1..b_s``."""

    bases: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", tuple(int(b) for b in self.bases))
        if not self.bases:
            raise ValueError("need at least one base")
        if any(b < 2 for b in self.bases):
            raise ValueError(f"bases must be >= 2: {self.bases}")
        for a, c in combinations(self.bases, 2):
            if math.gcd(a, c) != 1:
                raise ValueError(f"bases {a} and {c} are not coprime")

    @property
    def s(self) -> int:
        return len(self.bases)

    @property
    def B(self) -> int:
        return math.prod(self.bases)


def num_digits(n: int, b: int) -> int:
    """Number of base-``b`` digits of ``n`` (0 for ``n == 0``)."""
    k = 0
    while n:
        n //= b
        k += 1
    return k


def radical_inverse_numerator(n: int, b: int, precision: int) -> int:
    """``phi_b(n) * b**precision`` as an integer."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 0
    for _ in range(precision):
        n, d = divmod(n, b)
        out = out * b + d
    if n:
        raise ValueError(f"precision {precision} too small for the base-{b} digits of the index")
    return out


def radical_inverse(n: int, b: int, precision: int) -> BAdicNumber:
    """Van der Corput radical inverse ``phi_b(n)`` with ``precision`` digits."""
    return BAdicNumber.from_numerator(radical_inverse_numerator(n, b, precision), b, precision)


def radical_inverse_array(ns: np.ndarray, b: int, precision: int) -> np.ndarray:
    """Vectorised :func:`radical_inverse_numerator` (int64 only)."""
    if b**precision >= _INT64_LIMIT:
        raise OverflowError(f"base {b} with {precision} digits exceeds int64")
    n = np.asarray(ns, dtype=np.int64).copy()
    out = np.zeros_like(n)
    for _ in range(precision):
        out = out * b + n % b
        n //= b
    if n.any():
        raise ValueError(f"precision {precision} too small for the base-{b} digits of the index")
    return out


def halton_point(n: int, spec: HaltonSpec, precision: int) -> BAdicPoint:
    """``H_s(n)``; the sequence starts at ``n = 0``."""
    return BAdicPoint(tuple(radical_inverse(n, b, precision) for b in spec.bases))


def halton_set(spec: HaltonSpec, count: int, start: int = 0, precision: int | None = None) -> PointSet:
    """The points ``H_s(start), ..., H_s(start + count - 1)``."""
    last = start + count - 1
    if precision is None:
        precision = max(num_digits(max(last, 0), b) for b in spec.bases)
    ns = np.arange(start, start + count, dtype=np.int64)
    cols = [radical_inverse_array(ns, b, precision) for b in spec.bases]
    return PointSet(spec.bases, precision, np.stack(cols, axis=1) if cols else [])


def hammersley_net(m: int, b: int = 2, precision: int | None = None) -> PointSet:
    """``b**m`` points ``(phi_b(n), n / b**m)``; a (0, m, 2)-net in base ``b``.

    ``precision`` defaults to ``m + 2`` so that digit work has room past
    the net resolution; the extra digits are zero.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    p = m + 2 if precision is None else precision
    if p < m:
        raise ValueError("precision must be at least m")
    ns = np.arange(b**m, dtype=np.int64)
    first = radical_inverse_array(ns, b, p)
    second = ns * b ** (p - m)
    return PointSet((b, b), p, np.stack([first, second], axis=1))


def digital_shift_set(points: PointSet, w: BAdicPoint) -> PointSet:
    """Apply ``x (+) w`` to every point."""
    if w.s != points.s:
        raise ValueError(f"shift dimension {w.s} vs point dimension {points.s}")
    if w.bases != points.bases:
        raise BaseMismatchError(f"shift bases {w.bases} vs {points.bases}")
    p = max(points.precision, max(c.precision for c in w))
    pts = points if p == points.precision else points.with_precision(p)
    if all(b == 2 for b in pts.bases) and pts.numerators.dtype == np.int64:
        shift = np.array([c.padded(p).numerator for c in w], dtype=np.int64)
        return PointSet(pts.bases, p, pts.numerators ^ shift)
    digits = pts.digit_array()
    wd = np.array([c.padded(p).digits for c in w], dtype=np.int64)
    bases = np.array(pts.bases, dtype=np.int64)[None, :, None]
    return PointSet.from_digit_array(pts.bases, (digits + wd[None, :, :]) % bases)


def digital_unshift_set(points: PointSet, w: BAdicPoint) -> PointSet:
    """Apply ``x (-) w`` to every point."""
    neg = BAdicPoint(tuple(BAdicNumber(c.base, tuple((-d) % c.base for d in c.digits)) for c in w))
    return digital_shift_set(points, neg)


def copies_fixture(m: int, b: int = 2, s: int = 2) -> PointSet:
    """``b`` stacked copies of a (0, m-1, s)-net: a (1, m, s)-net that is not admissible."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if s != 2:
        raise NotImplementedError(f"copies fixture only has a net source for s = 2, got s = {s}")
    base = hammersley_net(m - 1, b, precision=m + 1)
    return PointSet(base.bases, base.precision, np.concatenate([base.numerators] * b, axis=0))


# --- CSV / text export -------------------------------------------------------

def to_csv(points: PointSet) -> str:
    """One row per point, coordinates as exact ``p/q`` strings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{j + 1}" for j in range(points.s)])
    for row in points.fractions():
        writer.writerow([format_rational(v) for v in row])
    return buf.getvalue()


def to_digit_csv(points: PointSet) -> str:
    """One row per point, coordinates as ``0.d1d2...`` digit strings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{j + 1}_base{b}" for j, b in enumerate(points.bases)])
    for pt in points:
        writer.writerow(["0." + "".join(str(d) if d < 10 else f"[{d}]" for d in c.digits) for c in pt])
    return buf.getvalue()


def from_csv(text: str, bases: Sequence[int] | None = None, precision: int | None = None) -> PointSet:
    """Parse :func:`to_csv` output.

    Each coordinate's base defaults to the product of the distinct primes in
    its denominators (``p/8`` gives base 2, ``p/9`` base 3); precision
    defaults to the fewest digits that represent every value exactly.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [[parse_rational(v) for v in row] for row in reader if row]
    s = len(header)
    if bases is None:
        bases = [_radical(math.lcm(*(r[j].denominator for r in rows)) if rows else 2) for j in range(s)]
    if precision is None:
        precision = 0
        for j, b in enumerate(bases):
            for r in rows:
                precision = max(precision, _digits_needed(r[j], b))
    return PointSet.from_fractions(rows, bases, precision)


def _radical(n: int) -> int:
    out, p = 1, 2
    while n > 1:
        if n % p == 0:
            out *= p
            while n % p == 0:
                n //= p
        p += 1
    return max(out, 2)


def _digits_needed(x: Fraction, b: int) -> int:
    k = 0
    while (x * b**k).denominator != 1:
        k += 1
        if k > 256:
            raise ValueError(f"{x} is not a finite base-{b} fraction")
    return k

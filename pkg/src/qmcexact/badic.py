"""Exact b-adic digit arithmetic.

Numbers in [0, 1) are stored as finite digit tuples ``(x_1, ..., x_P)`` with
``x = sum(x_i * b**-i)``; index 1 is the most significant fractional digit.
All values leave this module as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class BaseMismatchError(ValueError):
    """Raised when two operands carry different bases."""


@dataclass(frozen=True, eq=False)
class BAdicNumber:
    """Finite b-adic expansion ``0.x_1 x_2 ... x_P`` in base ``base``."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    @classmethod
    def zero(cls, base: int, precision: int = 0) -> BAdicNumber:
        return cls(base, (0,) * precision)

    @classmethod
    def from_numerator(cls, numerator: int, base: int, precision: int) -> BAdicNumber:
        """Build ``numerator / base**precision``; requires ``0 <= numerator < base**precision``."""
        if not 0 <= numerator < base**precision or (precision == 0 and numerator != 0):
            raise ValueError(f"{numerator} is not a {precision}-digit numerator in base {base}")
        digits = []
        for _ in range(precision):
            numerator, d = divmod(numerator, base)
            digits.append(d)
        return cls(base, tuple(reversed(digits)))

    @classmethod
    def from_fraction(
        cls, x: Fraction | int, base: int, precision: int, exact: bool = True
    ) -> BAdicNumber:
        """Digits of ``x`` in ``[0, 1)``.

        With ``exact=False`` the expansion is truncated (rounded toward zero)
        after ``precision`` digits; otherwise a value that needs more digits
        raises ``ValueError``.
        """
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError(f"{x} is not in [0, 1)")
        scaled = x * base**precision
        numerator = math.floor(scaled)
        if exact and numerator != scaled:
            raise ValueError(f"{x} has no {precision}-digit expansion in base {base}")
        return cls.from_numerator(numerator, base, precision)

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def numerator(self) -> int:
        """Integer ``n`` with ``value == n / base**precision``."""
        n = 0
        for d in self.digits:
            n = n * self.base + d
        return n

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.base**self.precision)

    def digit(self, i: int) -> int:
        """The ``i``-th digit (1-based); zero beyond the stored precision."""
        if i < 1:
            raise IndexError("digits are indexed from 1")
        return self.digits[i - 1] if i <= len(self.digits) else 0

    def padded(self, precision: int) -> BAdicNumber:
        if precision < self.precision:
            raise ValueError("padding cannot reduce precision; use truncate()")
        return BAdicNumber(self.base, self.digits + (0,) * (precision - self.precision))

    def _key(self) -> tuple[int, tuple[int, ...]]:
        digits = self.digits
        end = len(digits)
        while end and digits[end - 1] == 0:
            end -= 1
        return self.base, digits[:end]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BAdicNumber):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        body = "".join(_digit_char(d) for d in self.digits) or "0"
        return f"0.{body} (base {self.base})"

    def __repr__(self) -> str:
        return f"BAdicNumber(base={self.base}, digits={self.digits})"


@dataclass(frozen=True)
class BAdicPoint:
    """A point of ``[0, 1)^s``; coordinate bases may differ (Halton)."""

    coords: tuple[BAdicNumber, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")

    @classmethod
    def from_fractions(
        cls, values: Sequence[Fraction | int], bases: Sequence[int] | int, precision: int,
        exact: bool = True,
    ) -> BAdicPoint:
        if isinstance(bases, int):
            bases = [bases] * len(values)
        return cls(tuple(
            BAdicNumber.from_fraction(v, b, precision, exact) for v, b in zip(values, bases)
        ))

    @property
    def s(self) -> int:
        return len(self.coords)

    @property
    def bases(self) -> tuple[int, ...]:
        return tuple(c.base for c in self.coords)

    @property
    def value(self) -> tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, j: int) -> BAdicNumber:
        return self.coords[j]


def _digit_char(d: int) -> str:
    return "0123456789abcdefghijklmnopqrstuvwxyz"[d] if d < 36 else f"[{d}]"


def _check_bases(x: BAdicNumber, y: BAdicNumber) -> None:
    if x.base != y.base:
        raise BaseMismatchError(f"base {x.base} vs base {y.base}")


def truncate(x: BAdicNumber, m: int) -> BAdicNumber:
    """``[x]_m``: keep the first ``m`` digits. ``[x]_0`` is zero."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return BAdicNumber(x.base, x.digits[:m])


def _digitwise(x: BAdicNumber, y: BAdicNumber, sign: int) -> BAdicNumber:
    _check_bases(x, y)
    b = x.base
    p = max(x.precision, y.precision)
    return BAdicNumber(b, tuple((x.digit(i) + sign * y.digit(i)) % b for i in range(1, p + 1)))


def digit_add(x: BAdicNumber, sigma: BAdicNumber) -> BAdicNumber:
    """Digital shift ``x (+) sigma``: digit-wise sum mod b, no carries."""
    return _digitwise(x, sigma, 1)


def digit_sub(x: BAdicNumber, sigma: BAdicNumber) -> BAdicNumber:
    """Inverse shift ``x (-) sigma``."""
    return _digitwise(x, sigma, -1)


def point_add(x: BAdicPoint, w: BAdicPoint) -> BAdicPoint:
    if x.s != w.s:
        raise ValueError(f"dimension {x.s} vs {w.s}")
    return BAdicPoint(tuple(digit_add(a, b) for a, b in zip(x, w)))


def point_sub(x: BAdicPoint, w: BAdicPoint) -> BAdicPoint:
    if x.s != w.s:
        raise ValueError(f"dimension {x.s} vs {w.s}")
    return BAdicPoint(tuple(digit_sub(a, b) for a, b in zip(x, w)))


def leading_zeros(x: BAdicNumber) -> int | None:
    """Number of leading zero digits, or ``None`` when every digit is zero."""
    for k, d in enumerate(x.digits):
        if d:
            return k
    return None


def valuation(x: BAdicNumber) -> Fraction:
    """``||x||_b = b**-(k+1)`` for ``k`` leading zeros; exactly 0 for the zero expansion."""
    k = leading_zeros(x)
    if k is None:
        return Fraction(0)
    return Fraction(1, x.base ** (k + 1))


def point_valuation(x: BAdicPoint) -> Fraction:
    bases = set(x.bases)
    if len(bases) != 1:
        raise BaseMismatchError(f"point valuation needs one common base, got {sorted(bases)}")
    v = Fraction(1)
    for c in x:
        v *= valuation(c)
    return v


def to_rational(x: BAdicNumber) -> Fraction:
    return x.value


def format_rational(q: Fraction | int) -> str:
    """Render as ``"p/q"``, or ``"p"`` for integers; :func:`parse_rational` reads both."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def lcp_lengths(x: Iterable[BAdicNumber], y: Iterable[BAdicNumber]) -> list[int]:
    """Per-coordinate common-prefix lengths of two points (zero padding implied)."""
    out = []
    for a, c in zip(x, y):
        _check_bases(a, c)
        p = max(a.precision, c.precision)
        k = 0
        while k < p and a.digit(k + 1) == c.digit(k + 1):
            k += 1
        out.append(k)
    return out

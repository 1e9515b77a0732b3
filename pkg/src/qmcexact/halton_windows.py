"""Large-discrepancy windows of the Halton sequence.

The test box has corner ``y_i = sum_{j=1..m} b_i**(-j tau_i)`` where ``tau_i``
is the multiplicative order of ``b_i`` modulo ``B / b_i``. It splits into
boxes ``P_k`` (``k in {1..m}^s``) whose Halton members form a single residue
class ``n = y~_m + offset_k (mod B_{tau k})``. Averaging the discrepancy over
the window lengths ``N = 1..B_{tau m}`` starting at ``y~_m`` gives a closed form
``alpha_m``; a brute-force sweep over the same windows is the independent
check.

Boxes can be modified (addends removed, leading digits replaced) to show that
many corners near any point still give a large average.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .badic import BAdicNumber, BAdicPoint
from .discrepancy import halton_membership
from .errors import CapExceededError
from .generators import HaltonSpec

DEFAULT_CAP = 12**6
_CHUNK = 1 << 16


def multiplicative_order(a: int, n: int) -> int:
    """Least ``k >= 1`` with ``a**k == 1 (mod n)``, by direct search."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    x, k = a % n, 1
    while x != 1:
        x = x * a % n
        k += 1
    return k


@dataclass(frozen=True)
class HaltonFrame:
    spec: HaltonSpec
    tau: tuple[int, ...]

    @property
    def bases(self) -> tuple[int, ...]:
        return self.spec.bases

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def B(self) -> int:
        return self.spec.B

    def modulus(self, r: Sequence[int]) -> int:
        return math.prod(b**ri for b, ri in zip(self.bases, r))

    def scaled(self, k: Sequence[int] | int) -> tuple[int, ...]:
        """``tau * k`` componentwise; a scalar ``k`` applies to every coordinate."""
        if isinstance(k, int):
            k = (k,) * self.s
        return tuple(t * ki for t, ki in zip(self.tau, k))

    def period(self, k: Sequence[int] | int) -> int:
        return self.modulus(self.scaled(k))


def tau_orders(spec: HaltonSpec) -> HaltonFrame:
    """``tau_i = ord(b_i mod B / b_i)``."""
    if spec.s < 2:
        raise ValueError("the order tau_i needs at least two bases")
    return HaltonFrame(spec, tuple(multiplicative_order(b, spec.B // b) for b in spec.bases))


@dataclass(frozen=True)
class ModulusData:
    r: tuple[int, ...]
    modulus: int
    multipliers: tuple[int, ...]


def crt_data(frame: HaltonFrame, k: Sequence[int]) -> ModulusData:
    """``modulus`` and the CRT multipliers ``M_{i,r}`` for ``r = tau * k``."""
    if any(ki < 1 for ki in k):
        raise ValueError("k must be positive")
    r = frame.scaled(k)
    modulus = frame.modulus(r)
    multipliers = []
    for b, ri in zip(frame.bases, r):
        mod = b**ri
        cofactor = modulus // mod
        inv = pow(cofactor, -1, mod)
        if inv * cofactor % mod != 1 % mod or not 1 <= inv <= mod:
            raise ArithmeticError(f"bad inverse of {cofactor} modulo {mod}")
        multipliers.append(inv)
    return ModulusData(r, modulus, tuple(multipliers))


def digit_residue(x: BAdicNumber, r: int) -> int:
    """``sum_{j=1..r} x_j b**(j-1)``: the index residue mod ``b**r`` whose
    radical inverse shares ``x``'s first ``r`` digits."""
    return sum(x.digit(j) * x.base ** (j - 1) for j in range(1, r + 1))


def crt_combine(frame: HaltonFrame, r: Sequence[int], residues: Sequence[int]) -> int:
    """Unique ``n mod modulus`` with ``n == residues[i] (mod b_i**r_i)``."""
    modulus = frame.modulus(r)
    multipliers = []
    for b, ri in zip(frame.bases, r):
        mod = b**ri
        multipliers.append(pow(modulus // mod, -1, mod))
    return sum(mult * (modulus // b**ri) * x for mult, b, ri, x in zip(multipliers, frame.bases, r, residues)) % modulus


# --- test boxes ---------------------------------------------------------------

@dataclass(frozen=True)
class HaltonBox:
    """Corner digits per coordinate (``tau_i * m`` digits in base ``b_i``).

    ``removed[i]`` lists addend indices ``j`` whose digit at position
    ``j tau_i`` was cleared; ``prefix_lengths[i]`` counts leading digits
    replaced by caller-chosen ones.
    """

    frame: HaltonFrame
    m: int
    coords: tuple[BAdicNumber, ...]
    removed: tuple[frozenset[int], ...] = ()
    prefix_lengths: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        s = self.frame.s
        if not self.removed:
            object.__setattr__(self, "removed", (frozenset(),) * s)
        if not self.prefix_lengths:
            object.__setattr__(self, "prefix_lengths", (0,) * s)
        for c, b, t in zip(self.coords, self.frame.bases, self.frame.tau):
            if c.base != b or c.precision != t * self.m:
                raise ValueError(f"coordinate {c} must have {t * self.m} base-{b} digits")

    @property
    def upper(self) -> tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.upper, start=Fraction(1))

    @property
    def is_standard(self) -> bool:
        return not any(self.removed) and not any(self.prefix_lengths)

    @property
    def addend_structured(self) -> bool:
        """No leading digits were replaced, so the ``P_k`` split applies."""
        return not any(self.prefix_lengths)

    @property
    def preserves_alpha(self) -> bool:
        """Total replaced-prefix length below ``m``."""
        return sum(self.prefix_lengths) < self.m


def standard_box(frame: HaltonFrame, m: int) -> HaltonBox:
    if m < 1:
        raise ValueError("m must be >= 1")
    coords = []
    for b, t in zip(frame.bases, frame.tau):
        coords.append(BAdicNumber(b, tuple(1 if (i + 1) % t == 0 else 0 for i in range(t * m))))
    return HaltonBox(frame, m, tuple(coords))


def modified_box(
    box: HaltonBox,
    removals: Sequence[Sequence[int]] | None = None,
    prefixes: Sequence[Sequence[int]] | None = None,
) -> HaltonBox:
    """Clear addends and/or overwrite leading digits of ``box``.

    ``removals[i]`` are addend indices ``j in 1..m`` for coordinate ``i``;
    ``prefixes[i]`` are the new leading digits of coordinate ``i``.
    """
    s, m = box.frame.s, box.m
    removals = removals or [()] * s
    prefixes = prefixes or [()] * s
    coords, removed, lengths = [], [], []
    for i, (c, t) in enumerate(zip(box.coords, box.frame.tau)):
        digits = list(c.digits)
        for j in removals[i]:
            if not 1 <= j <= m:
                raise ValueError(f"addend index {j} outside 1..{m}")
            digits[j * t - 1] = 0
        pre = tuple(prefixes[i])
        if len(pre) > len(digits):
            raise ValueError(f"prefix of length {len(pre)} exceeds {len(digits)} digits")
        digits[: len(pre)] = pre
        coords.append(BAdicNumber(c.base, tuple(digits)))
        removed.append(box.removed[i] | frozenset(removals[i]))
        lengths.append(max(box.prefix_lengths[i], len(pre)))
    return HaltonBox(box.frame, m, tuple(coords), tuple(removed), tuple(lengths))


def piece_interval(box: HaltonBox, i: int, k: int) -> tuple[Fraction, Fraction]:
    """Coordinate ``i`` of ``P_k``: ``[[y_i]_{tau k} - b**-(tau k), [y_i]_{tau k})``."""
    b, t = box.frame.bases[i], box.frame.tau[i]
    hi = BAdicNumber(b, box.coords[i].digits[: t * k]).value
    return hi - Fraction(1, b ** (t * k)), hi


def piece_indices(box: HaltonBox) -> list[tuple[int, ...]]:
    """Index vectors ``k`` of the boxes partitioning ``[0, y)``."""
    if not box.addend_structured:
        raise ValueError("prefix-modified boxes have no P_k split")
    ranges = [[k for k in range(1, box.m + 1) if k not in box.removed[i]] for i in range(box.frame.s)]
    return list(product(*ranges))


def geometric_membership(box: HaltonBox, k: Sequence[int], n: int) -> bool:
    """``H_s(n) in P_k`` by direct comparison of radical inverses."""
    from .generators import halton_point, num_digits

    p = max(num_digits(n, b) for b in box.frame.bases) or 1
    x = halton_point(n, box.frame.spec, p).value
    return all(lo <= v < hi for v, (lo, hi) in zip(x, (piece_interval(box, i, ki) for i, ki in enumerate(k))))


@dataclass(frozen=True)
class WindowAnchor:
    window_start: int
    modulus: int  # B_{tau (m+1)}
    offsets: dict[tuple[int, ...], int] = field(repr=False, compare=False)


def anchor_residue(frame: HaltonFrame, box: HaltonBox) -> int:
    """``y~_m``: CRT solution at level ``tau (m+1)`` of the corner's digit residues.

    The digit expansion is extended by the next addend (a 1 at position
    ``tau_i (m+1)``), as for the unmodified corner.
    """
    m = box.m
    r = frame.scaled(m + 1)
    residues = []
    for c, t in zip(box.coords, frame.tau):
        ext = BAdicNumber(c.base, c.digits + (0,) * (t - 1) + (1,))
        residues.append(digit_residue(ext, t * (m + 1)))
    return crt_combine(frame, r, residues)


def residue_offset(frame: HaltonFrame, k: Sequence[int]) -> int:
    """``residue_offset == -sum_i M_{i,tau k} B_{tau k} / b_i (mod B_{tau k})`` in ``[0, B_{tau k})``."""
    data = crt_data(frame, k)
    return -sum(mult * data.modulus // b for mult, b in zip(data.multipliers, frame.bases)) % data.modulus


def window_anchor(frame: HaltonFrame, box: HaltonBox) -> WindowAnchor:
    ks = product(range(1, box.m + 1), repeat=frame.s)
    return WindowAnchor(anchor_residue(frame, box), frame.period(box.m + 1), {k: residue_offset(frame, k) for k in ks})


def piece_residue(box: HaltonBox, k: Sequence[int]) -> int:
    """The residue class of ``P_k`` straight from the digits of its lower corner."""
    frame = box.frame
    r = frame.scaled(k)
    residues = []
    for i, (c, ri) in enumerate(zip(box.coords, r)):
        lo, _ = piece_interval(box, i, k[i])
        residues.append(digit_residue(BAdicNumber.from_fraction(lo, c.base, ri), ri))
    return crt_combine(frame, r, residues)


def membership_congruence(frame: HaltonFrame, k: Sequence[int], n: int,
                          anchor: WindowAnchor | int) -> bool:
    """``n == y~_m + residue_offset (mod B_{tau k})``."""
    window_start = anchor if isinstance(anchor, int) else anchor.window_start
    B = frame.period(k)
    return (n - window_start - residue_offset(frame, k)) % B == 0


# --- averages -----------------------------------------------------------------

def window_average_closed(frame: HaltonFrame, box: HaltonBox | int) -> Fraction:
    """``sum_k (1/2 - residue_offset / B_{tau k} - 1 / (2 B_{tau k}))`` over the box's ``P_k``."""
    if isinstance(box, int):
        if box == 0:
            return Fraction(0)
        box = standard_box(frame, box)
    total = Fraction(0)
    for k in piece_indices(box):
        B = frame.period(k)
        total += Fraction(1, 2) - Fraction(residue_offset(frame, k), B) - Fraction(1, 2 * B)
    return total


def _check_cap(work: int, cap: int) -> None:
    if work > cap:
        raise CapExceededError(f"needs {work} sequence points, cap is {cap}")


def window_counts(spec: HaltonSpec, upper: Sequence[Fraction], start: int, length: int,
                  chunk: int = _CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Stream ``(N, C(N))`` chunks, ``C(N) = #{start <= n < start + N : H(n) in [0, upper)}``."""
    running = 0
    for lo in range(0, length, chunk):
        hi = min(lo + chunk, length)
        ns = np.arange(start + lo, start + hi, dtype=np.int64)
        c = np.cumsum(halton_membership(spec, upper, ns), dtype=np.int64) + running
        running = int(c[-1])
        yield np.arange(lo + 1, hi + 1, dtype=np.int64), c


def _scaled_deltas(N: np.ndarray, C: np.ndarray, vol: Fraction) -> np.ndarray:
    """``q * Delta(N) = q C(N) - p N`` for ``vol = p/q``; exact (object ints on overflow risk)."""
    p, q = vol.numerator, vol.denominator
    if q * (int(N[-1]) + 1) < 2**62:
        return q * C - p * N
    return np.array([q * int(c) - p * int(n) for n, c in zip(N, C)], dtype=object)


def window_average_bruteforce(frame: HaltonFrame, box: HaltonBox | int, cap: int = DEFAULT_CAP,
                     start: int | None = None) -> Fraction:
    """Average of ``Delta`` over the windows ``[y~_m, y~_m + N)``, ``N = 1..B_{tau m}``."""
    if isinstance(box, int):
        box = standard_box(frame, box)
    length = frame.period(box.m)
    _check_cap(length, cap)
    start = anchor_residue(frame, box) if start is None else start
    total = 0
    for _, C in window_counts(frame.spec, box.upper, start, length):
        total += int(C.sum())
    return (total - box.volume * Fraction(length * (length + 1), 2)) / length


@dataclass
class WindowSearchResult:
    m: int
    window_start: int
    n_star: int
    delta_window: Fraction
    window_average: Fraction
    window_average_closed: Fraction
    mean_abs_delta: Fraction
    delta_prefix: Fraction  # over n in [0, y~_m)
    delta_full: Fraction  # over n in [0, y~_m + N*)
    N_m: int
    N_m_limit: int
    log_normalized: float  # |delta_full| / (log N_m)^s, display only

    @property
    def averaging_ok(self) -> bool:
        return abs(self.delta_window) >= abs(self.window_average)

    @property
    def split_ok(self) -> bool:
        return max(abs(self.delta_prefix), abs(self.delta_full)) >= abs(self.window_average) / 2

    @property
    def range_ok(self) -> bool:
        return self.N_m <= self.N_m_limit

    @property
    def max_ge_mean(self) -> bool:
        return abs(self.delta_window) >= self.mean_abs_delta


def _prefix_delta(spec: HaltonSpec, upper, count: int, vol: Fraction) -> Fraction:
    c = 0
    for _, C in window_counts(spec, upper, 0, count):
        c = int(C[-1])
    return c - count * vol


def largest_window_search(frame: HaltonFrame, m: int, cap: int = DEFAULT_CAP,
                    box: HaltonBox | None = None) -> WindowSearchResult:
    """Largest ``|Delta|`` over the averaged windows, plus the prefix split."""
    box = standard_box(frame, m) if box is None else box
    length = frame.period(m)
    window_start = anchor_residue(frame, box)
    _check_cap(window_start + length, cap)
    vol = box.volume
    q = vol.denominator
    best_val, best_n, total, total_abs = -1, 0, 0, 0
    for N, C in window_counts(frame.spec, box.upper, window_start, length):
        total += int(C.sum())
        scaled = _scaled_deltas(N, C, vol)
        mags = np.abs(scaled)
        total_abs += int(mags.sum())
        i = int(np.argmax(mags))
        if int(mags[i]) > best_val:
            best_val, best_n = int(mags[i]), int(N[i])
    alpha_b = (total - vol * Fraction(length * (length + 1), 2)) / length
    n_star = best_n
    delta_window = _window_delta(frame.spec, box.upper, window_start, n_star, vol)
    prefix = _prefix_delta(frame.spec, box.upper, window_start, vol)
    full = prefix + delta_window
    N_m = window_start + n_star
    log_norm = float(abs(full)) / math.log(N_m) ** frame.s if N_m > 1 else float("nan")
    return WindowSearchResult(
        m=m, window_start=window_start, n_star=n_star, delta_window=delta_window,
        window_average=alpha_b, window_average_closed=window_average_closed(frame, box) if box.addend_structured else alpha_b,
        mean_abs_delta=Fraction(total_abs, q * length), delta_prefix=prefix, delta_full=full,
        N_m=N_m, N_m_limit=frame.period(m + 1) + length, log_normalized=log_norm,
    )


def _window_delta(spec, upper, start: int, length: int, vol: Fraction) -> Fraction:
    c = 0
    for _, C in window_counts(spec, upper, start, length):
        c = int(C[-1])
    return c - length * vol


def delta_trajectory(frame: HaltonFrame, box: HaltonBox, cap: int = DEFAULT_CAP,
                     start: int | None = None) -> list[tuple[int, Fraction]]:
    """``(N, Delta(window N))`` for every ``N = 1..B_{tau m}``, sorted by ``N``."""
    length = frame.period(box.m)
    _check_cap(length, cap)
    start = anchor_residue(frame, box) if start is None else start
    vol = box.volume
    out = []
    for N, C in window_counts(frame.spec, box.upper, start, length):
        out.extend((int(n), int(c) - int(n) * vol) for n, c in zip(N, C))
    return out


# --- dense corners and pigeonhole --------------------------------------------

def _require_23(frame: HaltonFrame) -> None:
    if frame.bases != (2, 3):
        raise ValueError(f"this construction is set up for bases (2, 3), got {frame.bases}")


def dense_corner_prefix_lengths(m: int) -> tuple[int, int]:
    """Shortest copied prefixes ``(l1, l2)`` that still pin the corner near ``x``.

    Copying ``l1`` binary and ``l2`` ternary digits leaves a gap below
    ``2**-l1`` and ``3**-l2`` per coordinate, so ``4**-l1 + 9**-l2 <= 8 / 2**m``
    gives the distance bound. The smallest total ``l1 + l2`` is taken (ties:
    fewer binary digits), since every copied digit costs average discrepancy.
    ``l1 = [m/2], l2 = m - 1 - l1`` always qualifies, so ``l1 + l2 < m``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    budget = Fraction(8, 2**m)
    for total in range(m):
        for l1 in range(total + 1):
            l2 = total - l1
            if Fraction(1, 4**l1) + Fraction(1, 9**l2) <= budget:
                return l1, l2
    raise AssertionError("unreachable: ([m/2], m - 1 - [m/2]) always fits")


def nearest_dense_corner(frame: HaltonFrame, x: Sequence[Fraction] | BAdicPoint, m: int) -> HaltonBox:
    """A modified corner copying the leading digits of ``x``.

    The prefix lengths come from :func:`dense_corner_prefix_lengths`, so the
    result lies within ``sqrt(8) 2**(-m/2)`` of ``x`` and ``l1 + l2 < m``.
    """
    _require_23(frame)
    if isinstance(x, BAdicPoint):
        x = x.value
    l1, l2 = dense_corner_prefix_lengths(m)
    prefixes = [
        BAdicNumber.from_fraction(Fraction(v), b, l, exact=False).digits
        for v, b, l in zip(x, frame.bases, (l1, l2))
    ]
    return modified_box(standard_box(frame, m), prefixes=prefixes)


def dense_corner_distance_ok(x: Sequence[Fraction], box: HaltonBox) -> bool:
    """Exact ``||x - y||_2 < sqrt(8) 2**(-m/2)`` (compared squared)."""
    d2 = sum((Fraction(a) - y) ** 2 for a, y in zip(x, box.upper))
    return d2 < Fraction(8, 2**box.m)


def grid_shape(count: int) -> tuple[int, int]:
    """``(nx, ny)`` with ``nx * ny == count`` and ``nx`` the smallest divisor >= sqrt(count)."""
    if count < 1:
        raise ValueError("need at least one cell")
    nx = next(d for d in range(1, count + 1) if count % d == 0 and d * d >= count)
    return nx, count // nx


def default_square_count(m: int) -> int:
    """``2**m / 32`` cells (at least one)."""
    return max(1, 2**m // 32)


@dataclass
class CellResult:
    cell: tuple[int, int]
    corner: tuple[Fraction, Fraction] | None
    window_start: int | None = None
    alpha: Fraction | None = None
    good_count: int = 0
    kappa: Fraction | None = None
    hit_at_n0: bool = False


@dataclass
class PigeonholeReport:
    m: int
    squares: int
    grid: tuple[int, int]
    c2: Fraction
    threshold: Fraction  # (c2 / 2) m^2
    windows: int  # B_{tau m}
    cells: list[CellResult]
    n0: int | None
    multiplicity: int
    total_good: int
    measure: Fraction  # area of cells hit at N0

    @property
    def found(self) -> list[CellResult]:
        return [c for c in self.cells if c.corner is not None]

    @property
    def missing(self) -> list[tuple[int, int]]:
        return [c.cell for c in self.cells if c.corner is None]

    @property
    def alpha_ok(self) -> bool:
        return all(abs(c.alpha) >= self.c2 * self.m**2 for c in self.found)

    @property
    def pigeonhole_lower(self) -> int:
        return -(-self.total_good // self.windows)

    @property
    def pigeonhole_ok(self) -> bool:
        return (self.total_good <= len(self.found) * self.windows
                and self.multiplicity >= self.pigeonhole_lower)

    @property
    def kappa_max(self) -> Fraction | None:
        ks = [c.kappa for c in self.found]
        return max(ks) if ks else None


def _cell_bounds(cell, grid) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    (i, j), (nx, ny) = cell, grid
    return Fraction(i, nx), Fraction(i + 1, nx), Fraction(j, ny), Fraction(j + 1, ny)


def _find_corner(frame, m, cell, grid, rng: random.Random, tries: int) -> HaltonBox | None:
    x0, x1, y0, y1 = _cell_bounds(cell, grid)
    candidates = [((x0 + x1) / 2, (y0 + y1) / 2)]
    denom = 6**12
    for _ in range(tries):
        candidates.append((x0 + (x1 - x0) * Fraction(rng.randrange(denom), denom),
                           y0 + (y1 - y0) * Fraction(rng.randrange(denom), denom)))
    for x in candidates:
        box = nearest_dense_corner(frame, x, m)
        u, v = box.upper
        if x0 <= u < x1 and y0 <= v < y1:
            return box
    return None


def pigeonhole_search(frame: HaltonFrame, m: int, square_count: int | None = None,
                    c2: Fraction = Fraction(1, 8), cap: int = DEFAULT_CAP,
                    seed: int = 0, tries: int = 64) -> PigeonholeReport:
    """Pigeonhole search for one window length that is bad for many cells.

    Each cell of a grid over ``[0, 1)^2`` gets a modified corner inside it.
    For each corner the windows ``[y~_m, y~_m + N)`` (its own anchor) are
    swept; ``N`` counts as good when ``|Delta| >= (c2/2) m^2``. ``N0`` is the
    window length good for the most cells.
    """
    _require_23(frame)
    c2 = Fraction(c2)
    count = default_square_count(m) if square_count is None else square_count
    grid = grid_shape(count)
    length = frame.period(m)
    _check_cap(length, cap)
    threshold = c2 / 2 * m * m
    rng = random.Random(seed)
    multiplicity = np.zeros(length, dtype=np.int64)
    cells: list[CellResult] = []
    good_masks: list[np.ndarray | None] = []
    for cell in product(range(grid[0]), range(grid[1])):
        box = _find_corner(frame, m, cell, grid, rng, tries)
        if box is None:
            cells.append(CellResult(cell, None))
            good_masks.append(None)
            continue
        window_start = anchor_residue(frame, box)
        vol = box.volume
        q = vol.denominator
        limit = threshold * q  # |q Delta| >= q * threshold
        total = 0
        parts = []
        for N, C in window_counts(frame.spec, box.upper, window_start, length):
            total += int(C.sum())
            scaled = _scaled_deltas(N, C, vol)
            parts.append(np.array([abs(int(v)) >= limit for v in scaled], dtype=bool)
                         if scaled.dtype == object else np.abs(scaled) >= limit)
        good = np.concatenate(parts)
        alpha = (total - vol * Fraction(length * (length + 1), 2)) / length
        n_good = int(good.sum())
        multiplicity += good
        cells.append(CellResult(cell, box.upper, window_start, alpha, n_good,
                                Fraction(length - n_good, length)))
        good_masks.append(good)
    total_good = sum(c.good_count for c in cells)
    n0, mult = None, 0
    if total_good:
        idx = int(np.argmax(multiplicity))
        n0, mult = idx + 1, int(multiplicity[idx])
        for c, g in zip(cells, good_masks):
            c.hit_at_n0 = g is not None and bool(g[idx])
    measure = Fraction(sum(c.hit_at_n0 for c in cells), count)
    return PigeonholeReport(m, count, grid, c2, threshold, length, cells, n0, mult, total_good, measure)


__all__ = [
    "residue_offset", "DEFAULT_CAP", "HaltonFrame", "HaltonBox", "ModulusData", "WindowSearchResult",
    "PigeonholeReport", "WindowAnchor", "window_average_bruteforce", "window_average_closed", "anchor_residue",
    "crt_data", "delta_trajectory", "digit_residue", "geometric_membership", "membership_congruence",
    "modified_box", "multiplicative_order", "piece_indices", "piece_interval", "piece_residue",
    "standard_box", "tau_orders", "largest_window_search", "pigeonhole_search", "dense_corner_distance_ok",
    "nearest_dense_corner", "dense_corner_prefix_lengths", "window_anchor",
]

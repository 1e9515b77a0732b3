"""The ten acceptance checks as plain functions.

Shared by ``qmcexact reproduce-all`` and ``tests/test_acceptance.py``. Every
verdict comes from exact comparisons; timings are reported alongside.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .badic import BAdicPoint, format_rational
from .discrepancy import star_discrepancy_exact, star_discrepancy_oracle
from .generators import HaltonSpec, PointSet, copies_fixture, digital_shift_set, hammersley_net
from .halton_windows import (
    residue_offset, window_average_bruteforce, window_average_closed, geometric_membership, membership_congruence,
    standard_box, tau_orders, largest_window_search, pigeonhole_search, dense_corner_distance_ok,
    nearest_dense_corner, window_anchor,
)
from .net_corners import (
    CornerBoundParams, dense_set_conditions, delta_decomposition, corner_distance_ok,
    even_position_corner, index_partition, corner_bound_check, nearest_corner, prescribed_net,
)
from .netcheck import admissibility_level, is_net, min_pairwise_valuation

# Calibrated threshold for the dense-corner average: every corner produced by
# nearest_dense_corner at m = 5 has alpha >= 0.150 m^2 (exhaustive over prefixes).
CALIBRATED_C2 = Fraction(1, 8)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    limit_seconds: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.seconds < self.limit_seconds

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f}s / {self.limit_seconds:.0f}s)"


def _random_shift(rng: random.Random, precision: int, s: int = 2, b: int = 2) -> BAdicPoint:
    q = b**precision
    return BAdicPoint.from_fractions([Fraction(rng.randrange(q), q) for _ in range(s)], b, precision)


def net_valuation_equivalence(seed: int = 0) -> CriterionResult:
    res = CriterionResult(1, "net valuation and admissibility, copies fixture", True, 10)
    rng = random.Random(seed)
    failures = []
    for m in range(2, 9):
        net = hammersley_net(m)
        sets = [net] + [digital_shift_set(net, _random_shift(rng, net.precision)) for _ in range(20)]
        for i, points in enumerate(sets):
            v = min_pairwise_valuation(points)
            level = admissibility_level(points, m, v)
            if v != Fraction(1, 2 ** (m + 1)) or level != 2:
                failures.append(f"m={m} set={i}: valuation {v}, level {level}")
        c = copies_fixture(m)
        if not (is_net(c, 1, m) and not is_net(c, 0, m) and min_pairwise_valuation(c) == 0):
            failures.append(f"m={m}: copies fixture")
    res.passed = not failures
    res.details = {"sets_checked": 7 * 21, "failures": failures}
    return res


def even_corner_bound() -> CriterionResult:
    res = CriterionResult(2, "explicit corner bound for shifted Hammersley nets", True, 30)
    rows = []
    for m in (4, 8, 12):
        corner = even_position_corner(m)
        points = prescribed_net(corner)
        dec = delta_decomposition(points, corner)
        part = index_partition(corner)
        limit = -Fraction(m, 4) / 2 ** (m + 2)
        ok = (dec.delta1 == 0 and not part.band and len(part.target) == m // 4
              and dec.direct <= limit and dec.consistent)
        rows.append({"m": m, "delta_over_n": format_rational(dec.direct), "limit": format_rational(limit),
                     "delta1": format_rational(dec.delta1), "a4": len(part.target), "ok": ok})
        res.passed &= ok
    res.details = {"cases": rows}
    return res


def alpha_oracle_equivalence() -> CriterionResult:
    res = CriterionResult(3, "closed-form average equals brute force", True, 60)
    frame = tau_orders(HaltonSpec((2, 3)))
    rows = []
    for m in (1, 2, 3):
        closed, brute = window_average_closed(frame, m), window_average_bruteforce(frame, m)
        rows.append({"m": m, "closed": format_rational(closed), "brute": format_rational(brute)})
        res.passed &= closed == brute
    res.details = {"cases": rows}
    return res


def residue_constant() -> CriterionResult:
    res = CriterionResult(4, "residue_offset / B_(tau k) constant", True, 5)
    frame = tau_orders(HaltonSpec((2, 3)))
    ratios = {Fraction(residue_offset(frame, k), frame.period(k)) for k in product(range(1, 5), repeat=2)}
    frame35 = tau_orders(HaltonSpec((3, 5)))
    predicted = (1 - Fraction(1, 3) - Fraction(1, 5)) % 1
    ratios35 = {Fraction(residue_offset(frame35, k), frame35.period(k)) for k in product(range(1, 4), repeat=2)}
    res.passed = ratios == {Fraction(1, 6)} and ratios35 == {predicted} == {Fraction(7, 15)}
    res.details = {"bases_2_3": sorted(map(format_rational, ratios)),
                   "bases_3_5": sorted(map(format_rational, ratios35))}
    return res


def alpha_magnitude() -> CriterionResult:
    res = CriterionResult(5, "alpha_m in (m^2/3 - 1/12, m^2/3)", True, 60)
    frame = tau_orders(HaltonSpec((2, 3)))
    rows = []
    for m in range(2, 6):
        a = window_average_closed(frame, m)
        brute = window_average_bruteforce(frame, m)
        lo, hi = Fraction(m * m, 3) - Fraction(1, 12), Fraction(m * m, 3)
        ok = lo < a < hi and a == brute
        rows.append({"m": m, "alpha": format_rational(a), "ok": ok})
        res.passed &= ok
    res.details = {"cases": rows}
    return res


def largest_window() -> CriterionResult:
    res = CriterionResult(6, "large window and prefix split at m = 3", True, 120)
    frame = tau_orders(HaltonSpec((2, 3)))
    r = largest_window_search(frame, 3)
    res.passed = (1 <= r.n_star <= 12**3 and r.averaging_ok and r.split_ok
                  and r.window_average == r.window_average_closed)
    res.details = {"n_star": r.n_star, "window_start": r.window_start, "delta_window": format_rational(r.delta_window),
                   "alpha": format_rational(r.window_average), "delta_prefix": format_rational(r.delta_prefix),
                   "delta_full": format_rational(r.delta_full), "N_m": r.N_m}
    return res


def dense_corners(seed: int = 0, samples: int = 1000, verified_nets: int = 10) -> CriterionResult:
    res = CriterionResult(7, "dense corners for m = 16 nets", True, 120)
    m, precision = 16, 24
    rng = random.Random(seed)
    params = CornerBoundParams.dense_set(2)
    failures, worst = [], None
    for i in range(samples):
        x = BAdicPoint.from_fractions(
            [Fraction(rng.randrange(2**precision), 2**precision) for _ in range(2)], 2, precision)
        corner = nearest_corner(x, m)
        band, on_target, _ = dense_set_conditions(corner)
        check = corner_bound_check(prescribed_net(corner), corner, params, verify_net=i < verified_nets)
        if not (corner_distance_ok(x, corner) and band == 0 and on_target >= Fraction(m, 16) and check.holds):
            failures.append(i)
        ratio = check.delta_over_n / check.bound
        worst = ratio if worst is None else min(worst, ratio)
    res.passed = not failures
    res.details = {"samples": samples, "failures": failures[:20], "min_delta_over_bound": format_rational(worst)}
    return res


def _random_planar_set(rng: random.Random) -> PointSet | list:
    n = rng.randint(1, 32)
    q = rng.choice([4, 8, 12, 16, 30, 64])
    return [(Fraction(rng.randrange(q), q), Fraction(rng.randrange(q), q)) for _ in range(n)]


def star_oracle_equivalence(seed: int = 0, sets: int = 100) -> CriterionResult:
    res = CriterionResult(8, "exact star discrepancy equals brute force", True, 60)
    rng = random.Random(seed)
    mismatches = []
    for i in range(sets):
        pts = _random_planar_set(rng)
        if star_discrepancy_exact(pts) != star_discrepancy_oracle(pts):
            mismatches.append(i)
    origin = star_discrepancy_exact([(Fraction(0), Fraction(0))])
    centre = star_discrepancy_exact([(Fraction(1, 2), Fraction(1, 2))])
    res.passed = not mismatches and origin == 1 and centre == Fraction(3, 4)
    res.details = {"mismatches": mismatches, "origin": format_rational(origin), "centre": format_rational(centre)}
    return res


def congruence_equivalence() -> CriterionResult:
    res = CriterionResult(9, "congruence membership equals geometric membership", True, 60)
    frame = tau_orders(HaltonSpec((2, 3)))
    box = standard_box(frame, 3)
    anchor = window_anchor(frame, box)
    bad = 0
    for k in product(range(1, 4), repeat=2):
        for n in range(12**4):
            bad += membership_congruence(frame, k, n, anchor) != geometric_membership(box, k, n)
    res.passed = bad == 0
    res.details = {"indices": 12**4, "disagreements": bad}
    return res


def pigeonhole_window(seed: int = 0) -> CriterionResult:
    res = CriterionResult(10, "pigeonhole window over dense corners at m = 5", True, 300)
    frame = tau_orders(HaltonSpec((2, 3)))
    m = 5
    report = pigeonhole_search(frame, m, square_count=8, c2=CALIBRATED_C2, seed=seed)
    rng = random.Random(seed)
    far = 0
    for _ in range(100):
        x = (Fraction(rng.randrange(10**9), 10**9), Fraction(rng.randrange(10**9), 10**9))
        far += not dense_corner_distance_ok(x, nearest_dense_corner(frame, x, m))
    res.passed = (not report.missing and report.alpha_ok and report.pigeonhole_ok and far == 0)
    res.details = {
        "c2": format_rational(report.c2), "n0": report.n0, "multiplicity": report.multiplicity,
        "lower_bound": report.pigeonhole_lower, "measure": format_rational(report.measure),
        "min_alpha": format_rational(min(c.alpha for c in report.found)) if report.found else None,
        "distance_failures": far,
    }
    return res


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: net_valuation_equivalence,
    2: even_corner_bound,
    3: alpha_oracle_equivalence,
    4: residue_constant,
    5: alpha_magnitude,
    6: largest_window,
    7: dense_corners,
    8: star_oracle_equivalence,
    9: congruence_equivalence,
    10: pigeonhole_window,
}


def run_criterion(number: int) -> CriterionResult:
    start = time.perf_counter()
    result = CRITERIA[number]()
    result.seconds = time.perf_counter() - start
    return result


def run_all() -> list[CriterionResult]:
    return [run_criterion(n) for n in sorted(CRITERIA)]

"""Command-line front end.

Every subcommand builds a report and writes it as JSON, or as CSV where a
trajectory or point list is the natural output. Exact values appear as
``"p/q"`` strings; the decimals next to them are for display only.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage error,
3 computational cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from typing import Any, Callable, Sequence

from .badic import BAdicPoint, format_rational, parse_rational
from .discrepancy import star_discrepancy_details, star_discrepancy_oracle, DEFAULT_ORACLE_CAP
from .errors import CapExceededError
from .generators import (
    HaltonSpec, PointSet, copies_fixture, digital_shift_set, from_csv, halton_set,
    hammersley_net, to_csv, to_digit_csv,
)
from .halton_windows import (
    DEFAULT_CAP, window_average_bruteforce, window_average_closed, delta_trajectory, standard_box, tau_orders,
    largest_window_search, pigeonhole_search,
)
from .net_corners import (
    CornerSpec, CornerBoundParams, ConstraintError, delta_decomposition, dense_set_conditions,
    corner_distance_ok, even_position_corner, index_partition, corner_bound_check, nearest_corner, prescribed_net,
)
from .netcheck import admissibility_level, is_net, min_pairwise_valuation
from .reproduce import CALIBRATED_C2, CRITERIA, run_criterion

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
CAP_ENV = "QMCEXACT_CAP"
TRAJECTORY_HEADER = "N,delta_num,delta_den"


class UsageError(ValueError):
    """Invalid parameter combination, detected before any computation."""


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{CAP_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise UsageError(f"{CAP_ENV} must be positive")
    return cap


def decimal(q: Fraction | int) -> str:
    """Display-only decimal rendering."""
    return f"{float(q):.12g}"


def _bases(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bases must be comma-separated integers, got {text!r}") from None
    if any(b < 2 for b in out):
        raise argparse.ArgumentTypeError("every base must be >= 2")
    return out


def _fraction(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _corner(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(t) for t in text.split(","))


# --- output -------------------------------------------------------------------

def write_atomic(text: str, path: str | None) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename; stdout if no path."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qmcexact-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_trajectory(rows: Sequence[tuple[int, Fraction]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER.split(","))
    for n, d in sorted(rows):
        d = Fraction(d)
        w.writerow([n, d.numerator, d.denominator])
    return buf.getvalue()


def _config(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"handler", "out", "format"}
    out = {}
    for key in sorted(vars(args)):
        if key in skip:
            continue
        v = getattr(args, key)
        if isinstance(v, Fraction):
            v = format_rational(v)
        elif isinstance(v, tuple):
            v = [format_rational(x) if isinstance(x, Fraction) else x for x in v]
        out[key] = v
    out["format"] = args.format
    return out


def _report(args, verdicts: dict[str, bool], values: dict[str, Any]) -> dict:
    return {
        "command": args.command,
        "config": _config(args),
        "passed": all(verdicts.values()),
        "verdicts": verdicts,
        "values": values,
    }


# --- point sources ------------------------------------------------------------

def _load_points(args) -> PointSet:
    if args.input:
        with open(args.input, newline="") as fh:
            return from_csv(fh.read())
    c = args.construction
    if c == "hammersley":
        if args.s != 2:
            raise UsageError("the Hammersley net is two-dimensional here (--s 2)")
        pts = hammersley_net(args.m, args.b)
    elif c == "shifted":
        if args.s != 2:
            raise UsageError("the shifted Hammersley net is two-dimensional here (--s 2)")
        pts = hammersley_net(args.m, args.b)
        rng = random.Random(args.seed)
        q = args.b**pts.precision
        w = BAdicPoint.from_fractions([Fraction(rng.randrange(q), q) for _ in range(2)], args.b, pts.precision)
        pts = digital_shift_set(pts, w)
    elif c == "copies":
        pts = copies_fixture(args.m, args.b, args.s)
    elif c == "halton":
        if args.count is None:
            raise UsageError("--construction halton needs --count")
        pts = halton_set(HaltonSpec(args.bases), args.count, args.start)
    else:
        raise UsageError("give --input or --construction")
    return pts


# --- subcommands --------------------------------------------------------------

def cmd_generate(args) -> tuple[dict | str, bool]:
    pts = _load_points(args)
    if args.format == "csv":
        return to_csv(pts), True
    if args.format == "digits":
        return to_digit_csv(pts), True
    values = {"N": len(pts), "bases": list(pts.bases), "precision": pts.precision,
              "points": [[format_rational(v) for v in row] for row in pts.fractions()]}
    return _report(args, {}, values), True


def cmd_check_net(args):
    pts = _load_points(args)
    s, b = pts.s, pts.base
    m = args.m
    if len(pts) != b**m:
        raise UsageError(f"{len(pts)} points is not b**m = {b**m}")
    if not 0 <= args.t <= m:
        raise UsageError("need 0 <= t <= m")
    verdict = is_net(pts, args.t, m)
    v = min_pairwise_valuation(pts)
    level = admissibility_level(pts, m, v)
    values: dict[str, Any] = {"is_net": verdict.is_net, "t": args.t, "m": m, "s": s, "b": b}
    if verdict.witness is not None:
        w = verdict.witness
        values["witness"] = {"orders": list(w.orders), "indices": list(w.indices),
                             "count": verdict.witness_count, "expected": b**args.t}
    values["min_valuation"] = format_rational(v)
    values["d"] = level
    report = _report(args, {"is_net": verdict.is_net}, values)
    if args.expect_net is not None:
        report["verdicts"] = {"matches_expectation": verdict.is_net == args.expect_net}
        report["passed"] = verdict.is_net == args.expect_net
    return report, report["passed"]


def cmd_discrepancy(args):
    pts = _load_points(args)
    if pts.s != 2 and not args.oracle:
        raise UsageError("the exact sweep is two-dimensional; use --oracle for other dimensions")
    values: dict[str, Any] = {"N": len(pts)}
    verdicts: dict[str, bool] = {}
    if pts.s == 2:
        d = star_discrepancy_details(pts)
        values.update(dstar=format_rational(d.value), dstar_decimal=decimal(d.value),
                      argmax_corner=[format_rational(c) for c in d.corner], limit_side=d.kind)
    if args.oracle:
        o = star_discrepancy_oracle(pts, cap=args.oracle_cap)
        values.update(oracle=format_rational(o), oracle_decimal=decimal(o))
        if pts.s == 2:
            verdicts["oracle_agrees"] = o == d.value
        else:
            values.update(dstar=format_rational(o), dstar_decimal=decimal(o))
    return _report(args, verdicts, values), all(verdicts.values())


def _net_corner(args) -> CornerSpec:
    if args.corner is None:
        return even_position_corner(args.m)
    if len(args.corner) != args.s:
        raise UsageError(f"--corner needs {args.s} coordinates")
    x = BAdicPoint.from_fractions(args.corner, args.b, args.m)
    if x.value != tuple(args.corner):
        raise UsageError(f"--corner must have at most {args.m} base-{args.b} digits")
    return CornerSpec.from_point(x, args.m)


def _decomposition_values(dec) -> dict:
    return {"delta1": format_rational(dec.delta1), "delta2": format_rational(dec.delta2),
            "delta3": format_rational(dec.delta3), "delta_over_n": format_rational(dec.direct),
            "delta_over_n_decimal": decimal(dec.direct)}


def cmd_net_corners(args):
    if args.mode == "theorem3":
        if args.b != 2 or args.s != 2:
            raise UsageError("theorem3 mode is base 2, s = 2")
        if args.m < 4 or args.m % 4:
            raise UsageError("theorem3 mode needs m a positive multiple of 4")
        corner = even_position_corner(args.m)
        pts = prescribed_net(corner)
        dec = delta_decomposition(pts, corner)
        part = index_partition(corner)
        bound = -Fraction(args.m, 4) / 2 ** (args.m + 2)
        values = {"corner": [format_rational(v) for v in corner.value], **_decomposition_values(dec),
                  "bound": format_rational(bound), "bound_decimal": decimal(bound),
                  "a2_size": len(part.band), "a4_size": len(part.target)}
        verdicts = {"delta1_zero": dec.delta1 == 0, "a2_empty": not part.band,
                    "a4_size_ok": len(part.target) == args.m // 4, "decomposition_consistent": dec.consistent,
                    "bound_ok": dec.direct <= bound}
        values = {"delta1": values.pop("delta1"), "bound_ok": verdicts["bound_ok"], **values}
        return _report(args, verdicts, values), all(verdicts.values())
    if args.mode == "lemma31":
        if args.s != 2:
            raise UsageError("lemma31 mode uses the shifted Hammersley net, s = 2")
        corner = _net_corner(args)
        params = CornerBoundParams(args.alpha if args.alpha is not None else args.s,
                                args.beta if args.beta is not None else Fraction(4), args.delta)
        pts = prescribed_net(corner)
        try:
            r = corner_bound_check(pts, corner, params)
        except ConstraintError as exc:
            values = {"corner": [format_rational(v) for v in corner.value], "constraint": str(exc)}
            return _report(args, {"hypotheses_hold": False}, values), False
        dec = delta_decomposition(pts, corner, params.alpha)
        values = {"corner": [format_rational(v) for v in corner.value], **_decomposition_values(dec),
                  "bound": format_rational(r.bound), "bound_decimal": decimal(r.bound),
                  "constant": format_rational(r.constant), "a2_size": r.a2_size, "a4_size": r.a4_size}
        verdicts = {"hypotheses_hold": True, "bound_ok": r.holds}
        return _report(args, verdicts, values), r.holds
    # theorem4
    if args.s != 2:
        raise UsageError("theorem4 mode checks s = 2 nets")
    lowest = 2 * args.s**args.s * (args.s - 1) ** args.s
    if args.m < lowest:
        raise UsageError(f"theorem4 mode needs m >= {lowest}")
    rng = random.Random(args.seed)
    params = CornerBoundParams.dense_set(args.s)
    precision = args.m + 8
    q = args.b**precision
    rows, ok = [], True
    for _ in range(args.samples):
        x = BAdicPoint.from_fractions([Fraction(rng.randrange(q), q) for _ in range(args.s)], args.b, precision)
        corner = nearest_corner(x, args.m)
        band, on_target, required = dense_set_conditions(corner)
        r = corner_bound_check(prescribed_net(corner), corner, params)
        row_ok = corner_distance_ok(x, corner) and band == 0 and on_target >= required and r.holds
        ok &= row_ok
        rows.append({"x": [format_rational(v) for v in x.value],
                     "corner": [format_rational(v) for v in corner.value],
                     "band_size": band, "target_size": on_target,
                     "delta_over_n": format_rational(r.delta_over_n), "bound": format_rational(r.bound),
                     "ok": row_ok})
    return _report(args, {"all_samples_ok": ok}, {"samples": rows}), ok


def _frame(args):
    spec = HaltonSpec(args.bases)
    if spec.s < 2:
        raise UsageError("need at least two bases")
    return tau_orders(spec)


def cmd_alpha(args):
    frame = _frame(args)
    if args.m < 0:
        raise UsageError("m must be >= 0")
    closed = window_average_closed(frame, args.m)
    if args.format == "csv":
        if args.m == 0:
            raise UsageError("no windows for m = 0")
        return render_trajectory(delta_trajectory(frame, standard_box(frame, args.m), args.cap)), True
    values: dict[str, Any] = {"tau": list(frame.tau), "closed": format_rational(closed),
                              "closed_decimal": decimal(closed)}
    verdicts = {}
    if args.oracle:
        brute = window_average_bruteforce(frame, args.m, args.cap) if args.m else Fraction(0)
        values.update(brute=format_rational(brute), brute_decimal=decimal(brute))
        verdicts["equal"] = closed == brute
        values["equal"] = closed == brute
    return _report(args, verdicts, values), all(verdicts.values())


def cmd_window_search(args):
    frame = _frame(args)
    if args.m < 1:
        raise UsageError("m must be >= 1")
    if args.format == "csv":
        return render_trajectory(delta_trajectory(frame, standard_box(frame, args.m), args.cap)), True
    r = largest_window_search(frame, args.m, args.cap)
    verdicts = {"averaging_ok": r.averaging_ok, "split_ok": r.split_ok, "range_ok": r.range_ok,
                "max_ge_mean": r.max_ge_mean, "alpha_oracle_equal": r.window_average == r.window_average_closed}
    values = {"tau": list(frame.tau), "window_start": r.window_start, "n_star": r.n_star,
              "delta_window": format_rational(r.delta_window), "delta_window_decimal": decimal(r.delta_window),
              "alpha": format_rational(r.window_average), "alpha_decimal": decimal(r.window_average),
              "mean_abs_delta": format_rational(r.mean_abs_delta),
              "delta_prefix": format_rational(r.delta_prefix), "delta_full": format_rational(r.delta_full),
              "N_m": r.N_m, "N_m_limit": r.N_m_limit,
              "log_normalized_decimal": f"{r.log_normalized:.12g}"}
    return _report(args, verdicts, values), all(verdicts.values())


def cmd_pigeonhole(args):
    frame = _frame(args)
    if frame.bases != (2, 3):
        raise UsageError("theorem5 uses bases 2,3")
    if args.m < 1:
        raise UsageError("m must be >= 1")
    if args.squares is not None and args.squares < 1:
        raise UsageError("--squares must be positive")
    rep = pigeonhole_search(frame, args.m, args.squares, args.c2, args.cap, args.seed)
    cells = [{"cell": list(c.cell),
              "corner": None if c.corner is None else [format_rational(v) for v in c.corner],
              "alpha": None if c.alpha is None else format_rational(c.alpha),
              "window_start": c.window_start, "good_count": c.good_count,
              "kappa": None if c.kappa is None else format_rational(c.kappa), "hit_at_n0": c.hit_at_n0}
             for c in rep.cells]
    verdicts = {"all_cells_found": not rep.missing, "alpha_ok": rep.alpha_ok,
                "pigeonhole_ok": rep.pigeonhole_ok}
    values = {"grid": list(rep.grid), "threshold": format_rational(rep.threshold), "windows": rep.windows,
              "n0": rep.n0, "multiplicity": rep.multiplicity, "pigeonhole_lower": rep.pigeonhole_lower,
              "total_good": rep.total_good, "measure": format_rational(rep.measure),
              "measure_decimal": decimal(rep.measure),
              "kappa_max": None if rep.kappa_max is None else format_rational(rep.kappa_max),
              "missing_cells": [list(c) for c in rep.missing], "cells": cells}
    return _report(args, verdicts, values), all(verdicts.values())


def cmd_reproduce_all(args):
    numbers = args.only or sorted(CRITERIA)
    results = []
    for n in numbers:
        if n not in CRITERIA:
            raise UsageError(f"no criterion {n}")
    for n in numbers:
        r = run_criterion(n)
        print(r.line(), file=sys.stderr)
        results.append({"number": r.number, "title": r.title, "passed": r.passed,
                        "within_time": r.within_time, "limit_seconds": r.limit_seconds,
                        "details": r.details})
    verdicts = {f"criterion_{r['number']}": r["passed"] and r["within_time"] for r in results}
    return _report(args, verdicts, {"criteria": results}), all(verdicts.values())


# --- parser -------------------------------------------------------------------

def _add_output(p: argparse.ArgumentParser, formats=("json",)) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="output path (default: stdout)")


def _add_source(p: argparse.ArgumentParser, constructions) -> None:
    p.add_argument("--construction", choices=constructions, default=constructions[0])
    p.add_argument("--input", help="point-set CSV with p/q cells")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--bases", type=_bases, default=(2, 3))
    p.add_argument("--count", type=int)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmcexact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    cap = dict(type=int, default=None, help=f"brute-force cap (default {DEFAULT_CAP}, or ${CAP_ENV})")

    p = sub.add_parser("generate", aliases=["export"], help="emit a point set")
    _add_source(p, ("hammersley", "shifted", "copies", "halton"))
    _add_output(p, ("csv", "digits", "json"))
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("check-net", help="(t, m, s)-net verdict and admissibility level")
    _add_source(p, ("hammersley", "shifted", "copies"))
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--expect-net", type=lambda s: s.lower() in ("1", "true", "yes"), default=None,
                   help="fail (exit 1) unless the verdict matches")
    _add_output(p)
    p.set_defaults(handler=cmd_check_net)

    p = sub.add_parser("discrepancy", help="exact star discrepancy")
    _add_source(p, ("hammersley", "shifted", "copies", "halton"))
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    _add_output(p)
    p.set_defaults(handler=cmd_discrepancy)

    p = sub.add_parser("levin-net", help="explicit large-discrepancy corners for nets")
    p.add_argument("--mode", choices=("theorem3", "theorem4", "lemma31"), default="theorem3")
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--corner", type=_corner, help="lemma31 corner as p/q,p/q (default: the m-digit even-position corner)")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=_fraction)
    p.add_argument("--delta", type=_fraction, help="omit for the delta -> infinity limit")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(handler=cmd_net_corners)

    p = sub.add_parser("alpha", help="average window discrepancy, closed form and brute force")
    p.add_argument("--bases", type=_bases, default=(2, 3))
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--cap", **cap)
    _add_output(p, ("json", "csv"))
    p.set_defaults(handler=cmd_alpha)

    p = sub.add_parser("theorem2", help="largest window discrepancy and prefix split")
    p.add_argument("--bases", type=_bases, default=(2, 3))
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--cap", **cap)
    _add_output(p, ("json", "csv"))
    p.set_defaults(handler=cmd_window_search)

    p = sub.add_parser("theorem5", help="pigeonhole window over dense corners")
    p.add_argument("--bases", type=_bases, default=(2, 3))
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--squares", type=int)
    p.add_argument("--c2", type=_fraction, default=CALIBRATED_C2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", **cap)
    _add_output(p)
    p.set_defaults(handler=cmd_pigeonhole)

    p = sub.add_parser("reproduce-all", help="run the acceptance checks")
    p.add_argument("--only", type=lambda s: [int(t) for t in s.split(",")], help="comma-separated criterion numbers")
    _add_output(p)
    p.set_defaults(handler=cmd_reproduce_all)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "export":
        args.command = "generate"
    try:
        if hasattr(args, "cap"):
            args.cap = default_cap() if args.cap is None else args.cap
            if args.cap < 1:
                raise UsageError("--cap must be positive")
        start = time.perf_counter()
        handler: Callable = args.handler
        result, passed = handler(args)
        if isinstance(result, dict):
            result["timing_seconds"] = round(time.perf_counter() - start, 6)
            text = render_json(result)
        else:
            text = result
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (ValueError, NotImplementedError) as exc:
        print(f"qmcexact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"qmcexact: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    write_atomic(text, args.out)
    return EXIT_OK if passed else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
``qmcexact reproduce-all`` for a JSON report.
"""

from __future__ import annotations

import pytest

from qmcexact.reproduce import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.details
    assert result.within_time, f"took {result.seconds:.1f}s, limit {result.limit_seconds:.0f}s"

"""Exact arithmetic for b-adic low-discrepancy point sets.

Point sets are built and compared with exact rationals. The package also
locates explicit corners where the local discrepancy of a net or of the
Halton sequence is provably large.
"""

from __future__ import annotations

from .badic import BAdicNumber, BAdicPoint, digit_add, digit_sub, truncate, valuation
from .discrepancy import local_discrepancy, star_discrepancy_exact, star_discrepancy_oracle
from .errors import CapExceededError
from .generators import HaltonSpec, PointSet, copies_fixture, halton_set, hammersley_net
from .netcheck import admissibility_level, is_net, min_pairwise_valuation

__version__ = "0.1.0"

__all__ = [
    "BAdicNumber", "BAdicPoint", "CapExceededError", "HaltonSpec", "PointSet",
    "admissibility_level", "copies_fixture", "digit_add", "digit_sub", "halton_set",
    "hammersley_net", "is_net", "local_discrepancy", "min_pairwise_valuation",
    "star_discrepancy_exact", "star_discrepancy_oracle", "truncate", "valuation",
]

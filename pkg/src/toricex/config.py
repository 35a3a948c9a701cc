"""Defaults shared by the engines and the command line."""

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class EnumerationLimits:
    # None means n + b + 4 for the family (n + 4 for other fans).
    initial_radius: Optional[int] = None
    doublings: int = 4


DEFAULT_LIMITS = EnumerationLimits()

VERIFY_GRID = [(n, b) for n in (2, 3, 4, 5) for b in (0, 1, 2, 3)]
FORBIDDEN_GRID = [(n, b) for n in (2, 3, 4, 5) for b in (0, 1)]
SPLIT_GRID = [(n, b) for n in (2, 3) for b in (0, 1, 2)]
SPLIT_PRIMES = (2, 3, 5, 7, 11)
ORACLE_GRID = [(n, b) for n in (2, 3, 4) for b in (0, 1, 2)]

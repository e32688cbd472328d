"""Certified two-sided estimates.

A :class:`Bracket` pairs a certified lower bound with a certified upper
bound for an exactly-defined but hard-to-compute quantity.  Each side
may carry a witness object (a cover, packing or separation certificate)
that an independent checker can re-verify from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    lo_certificate: Optional[Any] = None
    hi_certificate: Optional[Any] = None
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"invalid bracket: lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def ratio(self) -> float:
        """hi/lo, +inf when lo == 0."""
        return math.inf if self.lo == 0 else self.hi / self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def intersects(self, other: "Bracket", tol: float = 0.0) -> bool:
        return self.lo <= other.hi + tol and other.lo <= self.hi + tol

    def with_flags(self, *flags: str) -> "Bracket":
        return Bracket(self.lo, self.hi, self.lo_certificate,
                       self.hi_certificate, self.flags + flags)

    def log2(self) -> "Bracket":
        """Base-2 log bracket; log2(0) is mapped to 0 with a flag."""
        flags = self.flags
        lo, hi = self.lo, self.hi
        if lo <= 1.0:
            flags = flags + ("log-degenerate",) if lo < 1.0 or hi <= 1.0 else flags
        return Bracket(math.log2(max(lo, 1.0)), math.log2(max(hi, 1.0)), flags=flags)


def ratio_bracket(num: Bracket, den: Bracket) -> Bracket:
    """Interval quotient num/den for nonnegative brackets; flags degeneracy."""
    if den.lo <= 0:
        return Bracket(0.0, math.inf, flags=("degenerate-denominator",))
    return Bracket(num.lo / den.hi, num.hi / den.lo)

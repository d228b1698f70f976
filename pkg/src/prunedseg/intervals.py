"""Finite unions of closed intervals inside a bounded domain.

Winning sets of candidate change-points are stored as :class:`IntervalSet`
values.  All operations return new objects; nothing is mutated in place.

Conventions
-----------
* Intervals are closed, ``[lo, hi]`` with ``lo <= hi``.  A single point
  ``[x, x]`` is a valid, non-empty interval.
* Emptiness is structural: a set is empty iff it holds zero intervals.  No
  length threshold is ever applied.
* ``subtract`` keeps the boundary point shared with the removed interval, so
  the remaining pieces stay closed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .errors import InputError

EMPTY_SYMBOL = "∅"
UNION_SYMBOL = "∪"


class Interval(NamedTuple):
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def make_interval(lo: float, hi: float) -> Interval:
    """Build a validated interval; raises :class:`InputError` if ``lo > hi``."""
    lo = float(lo)
    hi = float(hi)
    if not (lo <= hi):
        raise InputError(f"malformed interval [{lo!r}, {hi!r}]")
    return Interval(lo, hi)


def _check(i: Optional[Interval]) -> Optional[Interval]:
    if i is not None and not (i.lo <= i.hi):
        raise InputError(f"malformed interval [{i.lo!r}, {i.hi!r}]")
    return i


@dataclass(frozen=True, slots=True)
class IntervalSet:
    """Ordered, pairwise disjoint closed intervals contained in ``domain``.

    Direct construction trusts the caller to pass canonical intervals; use
    :meth:`from_intervals` to sort, clip and merge arbitrary input.
    """

    intervals: tuple[Interval, ...]
    domain: Interval

    @classmethod
    def full(cls, domain: Interval) -> "IntervalSet":
        domain = make_interval(*domain)
        return cls((domain,), domain)

    @classmethod
    def empty(cls, domain: Interval) -> "IntervalSet":
        return cls((), make_interval(*domain))

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[float, float]],
                       domain: tuple[float, float]) -> "IntervalSet":
        domain = make_interval(*domain)
        pieces = []
        for lo, hi in intervals:
            iv = make_interval(lo, hi)
            lo, hi = max(iv.lo, domain.lo), min(iv.hi, domain.hi)
            if lo <= hi:
                pieces.append((lo, hi))
        pieces.sort()
        merged: list[Interval] = []
        for lo, hi in pieces:
            # overlapping or touching (zero gap) pieces collapse into one
            if merged and lo <= merged[-1].hi:
                if hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, hi)
            else:
                merged.append(Interval(lo, hi))
        return cls(tuple(merged), domain)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        return any(iv.lo <= x <= iv.hi for iv in self.intervals)

    def measure(self) -> float:
        """Total length, summed with :func:`math.fsum`."""
        return math.fsum(iv.hi - iv.lo for iv in self.intervals)

    def exact_measure(self) -> Fraction:
        """Total length computed exactly from the binary endpoint values."""
        return sum((Fraction(iv.hi) - Fraction(iv.lo) for iv in self.intervals),
                   Fraction(0))

    def intersect(self, i: Optional[Interval]) -> "IntervalSet":
        return intersect(self, i)

    def subtract(self, i: Optional[Interval]) -> "IntervalSet":
        return subtract(self, i)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.from_intervals(self.intervals + other.intervals, self.domain)

    def __str__(self) -> str:
        if not self.intervals:
            return EMPTY_SYMBOL
        return UNION_SYMBOL.join(f"[{iv.lo!r},{iv.hi!r}]" for iv in self.intervals)

    @classmethod
    def parse(cls, text: str, domain: tuple[float, float]) -> "IntervalSet":
        """Inverse of ``str()``: reads ``[lo,hi]∪[lo,hi]...`` or ``∅``."""
        text = text.strip()
        if text in (EMPTY_SYMBOL, ""):
            return cls.empty(domain)
        pieces = []
        for chunk in text.split(UNION_SYMBOL):
            m = re.fullmatch(r"\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]", chunk.strip())
            if m is None:
                raise InputError(f"cannot parse interval {chunk!r}")
            pieces.append((float(m.group(1)), float(m.group(2))))
        return cls.from_intervals(pieces, domain)


def intersect(s: IntervalSet, i: Optional[Interval]) -> IntervalSet:
    """Intersection with one closed interval; ``None`` stands for the empty interval."""
    i = _check(i)
    if i is None or not s.intervals:
        return IntervalSet((), s.domain)
    out = []
    for lo, hi in s.intervals:
        if hi < i.lo:
            continue
        if lo > i.hi:
            break
        lo2 = lo if lo > i.lo else i.lo
        hi2 = hi if hi < i.hi else i.hi
        out.append(Interval(lo2, hi2))
    return IntervalSet(tuple(out), s.domain)


def subtract(s: IntervalSet, i: Optional[Interval]) -> IntervalSet:
    """Set difference ``s \\ i``, closed at the cut points."""
    i = _check(i)
    if i is None or not s.intervals:
        return s
    out = []
    for iv in s.intervals:
        lo, hi = iv
        if hi < i.lo or lo > i.hi:
            out.append(iv)
            continue
        if lo < i.lo:
            out.append(Interval(lo, i.lo))
        if i.hi < hi:
            out.append(Interval(i.hi, hi))
    return IntervalSet(tuple(out), s.domain)


def is_empty(s: IntervalSet) -> bool:
    return not s.intervals

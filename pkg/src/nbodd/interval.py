"""Half-open intervals ``[lo, hi)`` over the extended reals.

Every equivalence class of prior log-odds is one of these. The lower end is
closed and the upper end open, so the two sink intervals ``(-inf, rho)`` and
``[rho, inf)`` partition the line exactly.

Membership follows the extended-real closure: ``+inf`` belongs to any
interval whose upper end is ``+inf`` and ``-inf`` belongs to any interval
whose lower end is ``-inf``. Finite points use plain ``lo <= x < hi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi})")

    @classmethod
    def full(cls) -> Interval:
        return cls(-INF, INF)

    @classmethod
    def empty(cls) -> Interval:
        return EMPTY

    @classmethod
    def at_least(cls, x: float) -> Interval:
        return cls(x, INF)

    @classmethod
    def below(cls, x: float) -> Interval:
        return cls(-INF, x)

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x: float) -> bool:
        return contains(self, x)

    def __str__(self) -> str:
        return format_interval(self)


EMPTY = Interval(0.0, 0.0)


def contains(interval: Interval, x: float) -> bool:
    if math.isnan(x):
        raise ValueError("cannot test membership of NaN")
    if interval.is_empty:
        return False
    if x == INF:
        return interval.hi == INF
    if x == -INF:
        return interval.lo == -INF
    return interval.lo <= x < interval.hi


def offset(interval: Interval, delta: float) -> Interval:
    """Shift by a finite ``delta``: returns ``{x : x - delta in interval}``."""
    if not math.isfinite(delta):
        raise ValueError(f"offset must be finite, got {delta}")
    if interval.is_empty:
        return EMPTY
    return Interval(interval.lo + delta, interval.hi + delta)


def preimage(interval: Interval, weight: float) -> Interval:
    """The set ``{x : x + weight in interval}``.

    Equal to ``offset(interval, -weight)`` for finite weights. An infinite
    weight sends every finite ``x`` to the same infinity, so the result is
    either the whole line or empty.
    """
    if math.isnan(weight):
        raise ValueError("weight must not be NaN")
    if math.isfinite(weight):
        return offset(interval, -weight)
    return Interval.full() if contains(interval, weight) else EMPTY


def intersect(a: Interval, b: Interval) -> Interval:
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo >= hi:
        return EMPTY
    return Interval(lo, hi)


def _fmt(x: float) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return f"{x:.6g}"


def format_interval(interval: Interval) -> str:
    if interval.is_empty:
        return "[)"
    return f"[{_fmt(interval.lo)}, {_fmt(interval.hi)})"

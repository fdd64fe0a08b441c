"""Bidimensional (spatial x temporal) locality costs.

The cost of an access combines the cheapest jump from a prior access on its
left and on its right, where each jump is priced max(f(distance), g(elapsed))
with f a subadditive spatial table and g a 0-1 temporal threshold. Time is
self-referential: it is the running sum of the per-access costs themselves.

The fast path prunes the candidate scan to the window of accesses still
inside the temporal threshold (time is non-decreasing, so the window is a
suffix); results are bit-identical to the full scan, which is kept as a
reference for tests.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from .errors import (
    DistanceOutOfDomain,
    IndexOutOfRange,
    InvalidParam,
    TallCacheViolation,
)
from .trace import ExecutionSequence

__all__ = [
    "BidimLocality",
    "TimedTrace",
    "make_bidim",
    "make_lmb",
    "eval_bidim",
    "two_finger_cost",
    "single_finger_cost",
    "time_of",
]

_TABLE_SLACK = 1e-12


@dataclass(frozen=True)
class BidimLocality:
    """Spatial table f on [0, N] plus a strict temporal cutoff.

    The temporal term is 0 for elapsed time strictly below `g_cutoff` and 1
    from the cutoff on. Distances beyond N saturate to cost 1 inside the cost
    routines; `eval_bidim` rejects them.
    """

    f_values: tuple[float, ...]
    g_cutoff: float
    N: int
    tag: str = ""

    def g(self, delta: float) -> int:
        return 0 if delta < self.g_cutoff else 1

    def tall_cache_ok(self) -> bool:
        """True iff the spatial term dominates the temporal one pointwise."""
        for k in range(self.N + 1):
            if self.f_values[k] < self.g(k):
                return False
        return True


def make_bidim(f_values, g_cutoff: float, tag: str = "") -> BidimLocality:
    """Validate and build a spatial table + temporal threshold pair."""
    f = [float(v) for v in f_values]
    if len(f) < 2:
        raise InvalidParam("f_values", "need entries for d=0 and d=1")
    if f[0] != 0.0:
        raise InvalidParam("f_values", "f(0) must be 0")
    if any(v < 0.0 or v > 1.0 for v in f):
        raise InvalidParam("f_values", "values must lie in [0, 1]")
    for d in range(1, len(f)):
        if f[d] < f[d - 1] - _TABLE_SLACK:
            raise InvalidParam("f_values", f"not non-decreasing at d={d}")
    N = len(f) - 1
    for x in range(1, N // 2 + 1):
        for y in range(x, N - x + 1):
            if f[x + y] > f[x] + f[y] + _TABLE_SLACK:
                raise InvalidParam("f_values", f"not subadditive at ({x},{y})")
    if not g_cutoff > 0:
        raise InvalidParam("g_cutoff", "must be positive")
    return BidimLocality(tuple(f), g_cutoff, N, tag)


def make_lmb(M: int, B: int) -> BidimLocality:
    """Cost function of a size-M cache with B-word blocks: f(d)=min(1,d/B),
    temporal cutoff M/B. Requires the tall-cache condition M >= B^2."""
    if B < 1:
        raise InvalidParam("B", "must be >= 1")
    if M < B or M % B != 0:
        raise InvalidParam("M", "must be a positive multiple of B")
    if M < B * B:
        raise TallCacheViolation(M, B)
    f = [min(1.0, d / B) for d in range(B + 1)]
    return BidimLocality(tuple(f), float(M // B), B, f"lmb(M={M},B={B})")


def eval_bidim(bl: BidimLocality, d: int, delta: float) -> float:
    """max(f(d), g(delta)) with strict domain checking."""
    if d < 0 or d > bl.N:
        raise DistanceOutOfDomain(0, d, bl.N)
    if delta < 0:
        raise InvalidParam("delta", "must be >= 0")
    return max(bl.f_values[d], float(bl.g(delta)))


@dataclass
class TimedTrace:
    """Per-access costs, prefix-sum times, and the chosen source per side."""

    seq: ExecutionSequence
    times: list[float]
    per_access_costs: list[float]
    finger_detail: list[tuple] = field(default_factory=list)

    @property
    def total(self) -> float:
        if not self.per_access_costs:
            return 0.0
        return self.times[-1] + self.per_access_costs[-1]


def time_of(timed: TimedTrace, i: int) -> float:
    """t(E,i), 1-based; t(E,1) = 0."""
    if not 1 <= i <= len(timed.times):
        raise IndexOutOfRange(f"index {i} outside [1, {len(timed.times)}]")
    return timed.times[i - 1]


def _f_saturated(bl: BidimLocality, d: int) -> float:
    return 1.0 if d > bl.N else bl.f_values[d]


class _Window:
    """Addresses of accesses still inside the temporal threshold.

    Expiry walks a pointer forward (times are non-decreasing); the sorted
    list holds distinct in-window addresses for nearest-neighbour bisects.
    """

    def __init__(self, accesses: list[int]):
        self.accesses = accesses
        self.lo = 0
        self.counts: dict[int, int] = {}
        self.sorted_addrs: list[int] = []
        self.last_index: dict[int, int] = {}

    def add(self, k: int) -> None:
        a = self.accesses[k]
        c = self.counts.get(a, 0)
        if c == 0:
            bisect.insort(self.sorted_addrs, a)
        self.counts[a] = c + 1
        self.last_index[a] = k

    def expire(self, upto: int, times: list[float], t_now: float, cutoff: float) -> None:
        while self.lo < upto and not (t_now - times[self.lo]) < cutoff:
            a = self.accesses[self.lo]
            self.counts[a] -= 1
            if self.counts[a] == 0:
                del self.counts[a]
                self.sorted_addrs.remove(a)
            self.lo += 1

    def nearest_left(self, addr: int):
        j = bisect.bisect_right(self.sorted_addrs, addr)
        if j == 0:
            return None
        return self.sorted_addrs[j - 1]

    def nearest_right(self, addr: int):
        j = bisect.bisect_left(self.sorted_addrs, addr)
        if j == len(self.sorted_addrs):
            return None
        return self.sorted_addrs[j]


def _run(seq: ExecutionSequence, bl: BidimLocality, two_finger: bool) -> TimedTrace:
    acc = seq.accesses
    n = len(acc)
    times: list[float] = []
    costs: list[float] = []
    details: list[tuple] = []
    window = _Window(acc)
    t = 0.0
    for i in range(n):
        e = acc[i]
        window.expire(i, times, t, bl.g_cutoff)
        left_addr = window.nearest_left(e)
        right_addr = window.nearest_right(e)
        left = (window.last_index[left_addr] + 1, e - left_addr) if left_addr is not None else None
        right = (window.last_index[right_addr] + 1, right_addr - e) if right_addr is not None else None
        L = _f_saturated(bl, left[1]) if left is not None else 1.0
        R = _f_saturated(bl, right[1]) if right is not None else 1.0
        if two_finger:
            cost = max(L + R - 1.0, 0.0)
        else:
            cost = min(L, R)
        detail_left = left if left is not None and L < 1.0 else None
        detail_right = right if right is not None and R < 1.0 else None
        times.append(t)
        costs.append(cost)
        details.append((detail_left, detail_right))
        t = t + cost
        window.add(i)
    return TimedTrace(seq, times, costs, details)


def two_finger_cost(seq: ExecutionSequence, bl: BidimLocality) -> TimedTrace:
    """Cost per access = max(L + R - 1, 0) from the cheapest left and right
    prior sources; a missing side counts 1. Times are prefix sums of costs."""
    return _run(seq, bl, two_finger=True)


def single_finger_cost(seq: ExecutionSequence, bl: BidimLocality) -> TimedTrace:
    """Cheapest single prior source, either side; 1 with no prior access."""
    return _run(seq, bl, two_finger=False)


def _run_naive(seq: ExecutionSequence, bl: BidimLocality, two_finger: bool) -> TimedTrace:
    """Literal all-prior-accesses scan; reference for the windowed fast path."""
    acc = seq.accesses
    times: list[float] = []
    costs: list[float] = []
    t = 0.0
    for i in range(len(acc)):
        e = acc[i]
        L = R = 1.0
        single = 1.0
        for k in range(i):
            d = abs(e - acc[k])
            delta = t - times[k]
            g = 0.0 if delta < bl.g_cutoff else 1.0
            value = max(_f_saturated(bl, d), g)
            single = min(single, value)
            if acc[k] <= e:
                L = min(L, value)
            if acc[k] >= e:
                R = min(R, value)
        cost = max(L + R - 1.0, 0.0) if two_finger else single
        times.append(t)
        costs.append(cost)
        t = t + cost
    return TimedTrace(seq, times, costs, [])

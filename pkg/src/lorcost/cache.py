"""Block arithmetic, query-type block-crossing cost, and cache simulation.

Costs that depend only on block boundaries (query-type traces) are counted
directly; general traces are run through a fully associative cache of M/B
blocks under LRU or ideal (farthest-next-use) replacement. Smoothed variants
average over every block alignment shift in [0, B) by enumeration, returning
exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidParam, InvalidShift, NotQueryType
from .trace import ExecutionSequence, is_query_type

__all__ = [
    "CacheConfig",
    "SimResult",
    "block_of",
    "co_cost_query",
    "smoothed_co_query",
    "simulate",
    "smoothed_cost",
]

_NEVER = float("inf")


@dataclass(frozen=True)
class CacheConfig:
    """Fully associative cache: capacity M words, block size B words."""

    M: int
    B: int
    policy: str = "lru"

    def __post_init__(self):
        if self.B < 1:
            raise InvalidParam("B", "must be >= 1")
        if self.M < self.B:
            raise InvalidParam("M", "must be >= B")
        if self.M % self.B != 0:
            raise InvalidParam("M", "must be a multiple of B")
        if self.policy not in ("lru", "belady"):
            raise InvalidParam("policy", f"unknown policy {self.policy!r}")

    @property
    def capacity(self) -> int:
        return self.M // self.B


@dataclass
class SimResult:
    total_misses: int
    per_access: list[int] = field(default_factory=list)
    evictions: list[tuple[int, int]] = field(default_factory=list)


def block_of(addr: int, B: int, shift: int = 0) -> int:
    if B < 1:
        raise InvalidParam("B", "must be >= 1")
    if not 0 <= shift < B:
        raise InvalidShift(shift, B)
    return (addr + shift) // B


def co_cost_query(seq: ExecutionSequence, B: int, shift: int = 0) -> int:
    """Count block changes between consecutive accesses of a query-type trace."""
    if B < 1:
        raise InvalidParam("B", "must be >= 1")
    if not 0 <= shift < B:
        raise InvalidShift(shift, B)
    if not is_query_type(seq):
        raise NotQueryType("trace addresses must be non-decreasing")
    acc = seq.accesses
    cost = 0
    prev = None
    for a in acc:
        b = (a + shift) // B
        if prev is not None and b != prev:
            cost += 1
        prev = b
    return cost


def smoothed_co_query(seq: ExecutionSequence, B: int) -> Fraction:
    """Exact mean of co_cost_query over all B shifts, by enumeration."""
    if B < 1:
        raise InvalidParam("B", "must be >= 1")
    if not is_query_type(seq):
        raise NotQueryType("trace addresses must be non-decreasing")
    if len(seq) < 2:
        return Fraction(0)
    arr = np.asarray(seq.accesses, dtype=np.int64)
    shifts = np.arange(B, dtype=np.int64)
    blocks = (arr[:, None] + shifts[None, :]) // B
    total = int(np.count_nonzero(blocks[1:] != blocks[:-1]))
    return Fraction(total, B)


def _shifted_blocks(seq: ExecutionSequence, B: int, shift: int) -> list[int]:
    if B == 1 and shift == 0:
        return list(seq.accesses)
    arr = np.asarray(seq.accesses, dtype=np.int64)
    return ((arr + shift) // B).tolist()


def _next_uses(blocks: list[int]) -> list[float]:
    nxt: list[float] = [0.0] * len(blocks)
    last: dict[int, int] = {}
    for i in range(len(blocks) - 1, -1, -1):
        b = blocks[i]
        nxt[i] = last.get(b, _NEVER)
        last[b] = i
    return nxt


def simulate(seq: ExecutionSequence, cfg: CacheConfig, shift: int = 0) -> SimResult:
    """Run the cache over shifted block ids, recording per-access cost and evictions.

    The cache starts empty. LRU refreshes recency on every touch; ideal
    replacement evicts the resident block reused farthest in the future,
    preferring never-reused blocks and breaking ties toward the lowest id.
    """
    if not 0 <= shift < cfg.B:
        raise InvalidShift(shift, cfg.B)
    blocks = _shifted_blocks(seq, cfg.B, shift)
    capacity = cfg.capacity
    per_access: list[int] = []
    evictions: list[tuple[int, int]] = []
    misses = 0
    if cfg.policy == "lru":
        cache: dict[int, None] = {}
        for i, b in enumerate(blocks):
            if b in cache:
                del cache[b]
                cache[b] = None
                per_access.append(0)
                continue
            misses += 1
            per_access.append(1)
            if len(cache) == capacity:
                victim = next(iter(cache))
                del cache[victim]
                evictions.append((i + 1, victim))
            cache[b] = None
    else:
        nxt = _next_uses(blocks)
        resident: dict[int, float] = {}
        for i, b in enumerate(blocks):
            if b in resident:
                resident[b] = nxt[i]
                per_access.append(0)
                continue
            misses += 1
            per_access.append(1)
            if len(resident) == capacity:
                victim = max(resident, key=lambda blk: (resident[blk], -blk))
                del resident[victim]
                evictions.append((i + 1, victim))
            resident[b] = nxt[i]
    return SimResult(misses, per_access, evictions)


def _miss_count(blocks: list[int], capacity: int, policy: str) -> int:
    """Total misses only; kept in lockstep with simulate (tested against it)."""
    misses = 0
    if policy == "lru":
        cache: dict[int, None] = {}
        for b in blocks:
            if b in cache:
                del cache[b]
                cache[b] = None
                continue
            misses += 1
            if len(cache) == capacity:
                del cache[next(iter(cache))]
            cache[b] = None
    else:
        nxt = _next_uses(blocks)
        resident: dict[int, float] = {}
        for i, b in enumerate(blocks):
            if b in resident:
                resident[b] = nxt[i]
                continue
            misses += 1
            if len(resident) == capacity:
                victim = max(resident, key=lambda blk: (resident[blk], -blk))
                del resident[victim]
            resident[b] = nxt[i]
    return misses


def smoothed_cost(seq: ExecutionSequence, cfg: CacheConfig) -> Fraction:
    """Exact mean of simulate(...).total_misses over all B shifts."""
    if len(seq) == 0:
        return Fraction(0)
    total = 0
    for shift in range(cfg.B):
        total += _miss_count(_shifted_blocks(seq, cfg.B, shift), cfg.capacity, cfg.policy)
    return Fraction(total, cfg.B)

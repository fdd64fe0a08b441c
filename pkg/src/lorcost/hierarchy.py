"""Multi-level memory hierarchies as weighted sums of per-level costs."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO

from .bidim import make_lmb, two_finger_cost
from .cache import CacheConfig, smoothed_cost
from .errors import InvalidParam, TallCacheViolation
from .trace import ExecutionSequence

__all__ = [
    "Hierarchy",
    "GeometricSpec",
    "BoundReport",
    "build_geometric",
    "hierarchy_cost",
    "level_ratio_bound",
    "load_hierarchy",
    "save_hierarchy",
]


@dataclass(frozen=True)
class Hierarchy:
    """Ordered levels (memory words, block words, access weight), ascending B."""

    levels: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if not self.levels:
            raise InvalidParam("levels", "need at least one level")
        prev_b = 0
        for M, B, C in self.levels:
            CacheConfig(M, B)
            if M < B * B:
                raise TallCacheViolation(M, B)
            if C <= 0:
                raise InvalidParam("C", "weights must be positive")
            if B <= prev_b:
                raise InvalidParam("B", "levels must have strictly increasing block size")
            prev_b = B

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class GeometricSpec:
    """Geometric level progression: B doubles (or more) per level, with
    memory and weight derived from B."""

    B0: int
    growth: int
    depth: int
    mu: str = "square"          # square: M=B^2, scaled_square: M=a*B^2
    gamma: str = "constant"     # constant, linear: C=B, power: C=B^c_exp
    mu_scale: int = 1
    c_exp: int = 1

    def __post_init__(self):
        if self.B0 < 1 or self.B0 & (self.B0 - 1) != 0:
            raise InvalidParam("B0", "must be a power of two")
        if self.growth < 2:
            raise InvalidParam("growth", "must be >= 2")
        if self.depth < 1:
            raise InvalidParam("depth", "must be >= 1")
        if self.mu not in ("square", "scaled_square"):
            raise InvalidParam("mu", f"unknown memory law {self.mu!r}")
        if self.gamma not in ("constant", "linear", "power"):
            raise InvalidParam("gamma", f"unknown weight law {self.gamma!r}")
        if self.mu_scale < 1:
            raise InvalidParam("mu_scale", "must be >= 1")


@dataclass
class BoundReport:
    lor_total: float
    co_total: float
    max_weight_ratio: float
    holds: bool
    per_level: list[dict] = field(default_factory=list)


def build_geometric(spec: GeometricSpec) -> Hierarchy:
    levels = []
    B = spec.B0
    for _ in range(spec.depth):
        M = B * B if spec.mu == "square" else spec.mu_scale * B * B
        if spec.gamma == "constant":
            C = 1.0
        elif spec.gamma == "linear":
            C = float(B)
        else:
            C = float(B ** spec.c_exp)
        levels.append((M, B, C))
        B *= spec.growth
    return Hierarchy(tuple(levels))


def hierarchy_cost(seq: ExecutionSequence, hier: Hierarchy, model: str) -> float:
    """Weighted sum of per-level costs.

    co: ideal-replacement smoothed misses; lru: LRU smoothed misses;
    lor: two-finger cost under each level's cache-equivalent cost function.
    """
    if model not in ("co", "lru", "lor"):
        raise InvalidParam("model", f"unknown model {model!r}")
    total = 0.0
    for M, B, C in hier.levels:
        if model == "lor":
            level = two_finger_cost(seq, make_lmb(M, B)).total
        else:
            policy = "belady" if model == "co" else "lru"
            level = float(smoothed_cost(seq, CacheConfig(M, B, policy)))
        total += C * level
    return total


def level_ratio_bound(seq: ExecutionSequence, hier: Hierarchy) -> BoundReport:
    """Check lor_total <= 2 * (max adjacent weight ratio) * co_total."""
    if len(hier) < 2:
        raise InvalidParam("levels", "need at least two levels")
    per_level = []
    lor_total = 0.0
    co_total = 0.0
    for M, B, C in hier.levels:
        lor = two_finger_cost(seq, make_lmb(M, B)).total
        co = float(smoothed_cost(seq, CacheConfig(M, B, "belady")))
        per_level.append({"M": M, "B": B, "C": C, "lor": lor, "co": co})
        lor_total += C * lor
        co_total += C * co
    weights = [C for _, _, C in hier.levels]
    max_ratio = max(weights[i] / weights[i - 1] for i in range(1, len(weights)))
    holds = lor_total <= 2.0 * max_ratio * co_total
    return BoundReport(lor_total, co_total, max_ratio, holds, per_level)


def load_hierarchy(source: IO[str]) -> Hierarchy:
    """Read the CSV format: header `M,B,C`, one level per row, ascending B."""
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:3]] != ["M", "B", "C"]:
        raise InvalidParam("header", "expected 'M,B,C'")
    levels = []
    for row in reader:
        if not row:
            continue
        levels.append((int(row[0]), int(row[1]), float(row[2])))
    return Hierarchy(tuple(levels))


def save_hierarchy(hier: Hierarchy, sink: IO[str]) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["M", "B", "C"])
    for M, B, C in hier.levels:
        writer.writerow([M, B, repr(C) if C != int(C) else int(C)])

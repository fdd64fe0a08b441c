"""Memory-access traces: the universal input of every cost model.

A trace is an ordered list of non-negative word addresses. Generators for
the structured trace families (scans, strided walks, stage-halving fills,
permuted section scans, binary-search descents) live here too; all of them
are pure functions of their parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import InvalidParam, NegativeAddress, ParseError

__all__ = [
    "ExecutionSequence",
    "TraceGenSpec",
    "load_trace",
    "save_trace",
    "is_query_type",
    "generate",
    "scan",
    "strided",
    "stage_halving",
    "disjoint_scan",
    "binary_search",
    "repeated_scan",
]


@dataclass
class ExecutionSequence:
    """Ordered list of word addresses, with a free-form label."""

    accesses: list[int] = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        for a in self.accesses:
            if a < 0:
                raise NegativeAddress(0, a)

    def __len__(self) -> int:
        return len(self.accesses)

    def __iter__(self):
        return iter(self.accesses)

    def __getitem__(self, i):
        return self.accesses[i]


@dataclass
class TraceGenSpec:
    """Kind tag plus kind-specific integer parameters for `generate`."""

    kind: str
    params: dict[str, int] = field(default_factory=dict)


def load_trace(source: IO[str] | Iterable[str], label: str = "") -> ExecutionSequence:
    """Read one decimal address per line; '#' comments and blank lines are skipped."""
    accesses = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = int(line, 10)
        except ValueError:
            raise ParseError(line_no, line) from None
        if value < 0:
            raise NegativeAddress(line_no, value)
        accesses.append(value)
    return ExecutionSequence(accesses, label)


def save_trace(seq: ExecutionSequence, sink: IO[str]) -> None:
    """Write the format `load_trace` reads, newline-terminated."""
    for a in seq.accesses:
        sink.write(f"{a}\n")


def is_query_type(seq: ExecutionSequence) -> bool:
    """True iff addresses are non-decreasing (vacuously true when empty)."""
    acc = seq.accesses
    return all(acc[i - 1] <= acc[i] for i in range(1, len(acc)))


def _require(cond: bool, name: str, detail: str) -> None:
    if not cond:
        raise InvalidParam(name, detail)


def scan(n: int, start: int = 0) -> ExecutionSequence:
    _require(n >= 1, "n", "must be >= 1")
    _require(start >= 0, "start", "must be >= 0")
    return ExecutionSequence(list(range(start, start + n)), f"scan(n={n},start={start})")


def strided(count: int, stride: int, start: int = 0) -> ExecutionSequence:
    _require(count >= 1, "count", "must be >= 1")
    _require(stride >= 1, "stride", "must be >= 1")
    _require(start >= 0, "start", "must be >= 0")
    return ExecutionSequence(
        [start + i * stride for i in range(count)],
        f"strided(count={count},stride={stride},start={start})",
    )


def stage_halving(B: int) -> ExecutionSequence:
    """0, B, then per stage k the 2^(k-1) midpoints (2i+1)*B/2^k in increasing i.

    B must be a power of two so every midpoint is integral.
    """
    _require(B >= 1, "B", "must be >= 1")
    _require(B & (B - 1) == 0, "B", "must be a power of two")
    accesses = [0, B]
    k = 1
    while (1 << k) <= B:
        step = B >> k
        accesses.extend((2 * i + 1) * step for i in range(1 << (k - 1)))
        k += 1
    return ExecutionSequence(accesses, f"stage_halving(B={B})")


_DISJOINT_SCAN_TRIES = 10_000


def disjoint_scan(section_count: int, section_length: int, seed: int = 0) -> ExecutionSequence:
    """Scan `section_count` contiguous runs of `section_length` words in logical order.

    The runs are packed into [0, count*length) in a seeded permuted order; the
    permutation is re-drawn until no junction jump has distance 1, so the trace
    has exactly count*length accesses and count-1 non-unit jumps.
    """
    _require(section_count >= 1, "section_count", "must be >= 1")
    _require(section_length >= 1, "section_length", "must be >= 1")
    s, ell = section_count, section_length
    rng = random.Random(seed)
    for _ in range(_DISJOINT_SCAN_TRIES):
        perm = rng.sample(range(s), s) if s > 1 else [0]
        ok = True
        for i in range(s - 1):
            junction = abs(perm[i + 1] * ell - (perm[i] * ell + ell - 1))
            if junction == 1:
                ok = False
                break
        if ok:
            accesses = []
            for slot in perm:
                base = slot * ell
                accesses.extend(range(base, base + ell))
            return ExecutionSequence(
                accesses, f"disjoint_scan(s={s},l={ell},seed={seed})"
            )
    raise InvalidParam(
        "section_count", f"no unit-jump-free arrangement of {s} sections of {ell}"
    )


def binary_search(n: int, target: int) -> ExecutionSequence:
    """Midpoints visited searching index `target` in a sorted array of size n.

    mid = floor((lo+hi)/2) with inclusive bounds; the trace ends at the hit.
    """
    _require(n >= 1, "n", "must be >= 1")
    _require(0 <= target < n, "target", f"must be in [0, {n})")
    lo, hi = 0, n - 1
    accesses = []
    while lo <= hi:
        mid = (lo + hi) // 2
        accesses.append(mid)
        if mid == target:
            break
        if target < mid:
            hi = mid - 1
        else:
            lo = mid + 1
    return ExecutionSequence(accesses, f"binary_search(n={n},target={target})")


def repeated_scan(k: int, repetitions: int) -> ExecutionSequence:
    _require(k >= 1, "k", "must be >= 1")
    _require(repetitions >= 1, "repetitions", "must be >= 1")
    return ExecutionSequence(
        list(range(k)) * repetitions, f"repeated_scan(k={k},reps={repetitions})"
    )


_GENERATORS = {
    "scan": (scan, ("n", "start")),
    "strided": (strided, ("count", "stride", "start")),
    "stage_halving": (stage_halving, ("B",)),
    "disjoint_scan": (disjoint_scan, ("section_count", "section_length", "seed")),
    "binary_search": (binary_search, ("n", "target")),
    "repeated_scan": (repeated_scan, ("k", "repetitions")),
}


def generate(spec: TraceGenSpec) -> ExecutionSequence:
    """Dispatch a TraceGenSpec to its generator; pure in its parameters."""
    if spec.kind not in _GENERATORS:
        raise InvalidParam("kind", f"unknown trace kind {spec.kind!r}")
    fn, names = _GENERATORS[spec.kind]
    unknown = set(spec.params) - set(names)
    if unknown:
        raise InvalidParam(sorted(unknown)[0], f"not a parameter of {spec.kind}")
    return fn(**spec.params)

"""Univariate locality cost functions and trace costs under them.

A locality function is a tabulated map from jump distance to cost: zero at
distance 0, non-decreasing, and subadditive. The module builds the stock
families, validates arbitrary tables, prices traces, splits a concave table
into weighted block-threshold terms, and bins jump distances dyadically.
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .errors import DistanceOutOfDomain, InvalidParam, NotConcave
from .trace import ExecutionSequence

__all__ = [
    "LocalityFunction",
    "Decomposition",
    "JumpHistogram",
    "ValidityReport",
    "make_locality",
    "validate",
    "lor_cost",
    "decompose",
    "combined_lor_cost",
    "jump_histogram",
    "load_locality",
    "save_locality",
]

# Slack for validating tabulated floats; sums here involve <= 1e6 terms of
# magnitude <= N, so anything beyond round-off is a real violation.
_CURVATURE_SLACK = 1e-12


@dataclass
class LocalityFunction:
    """Cost table ell(0..N) with its domain bound and a family tag."""

    N: int
    values: list[float]
    family_tag: str = ""

    def __post_init__(self):
        if self.N < 1:
            raise InvalidParam("N", "must be >= 1")
        if len(self.values) != self.N + 1:
            raise InvalidParam("values", f"need {self.N + 1} entries, got {len(self.values)}")

    def __call__(self, d: int) -> float:
        if d < 0 or d > self.N:
            raise DistanceOutOfDomain(0, d, self.N)
        return self.values[d]


@dataclass
class ValidityReport:
    valid: bool
    violations: list[tuple[int, int, str]] = field(default_factory=list)


@dataclass
class Decomposition:
    """Weighted block-threshold terms reconstructing a source table.

    Each (alpha, beta) term contributes alpha * min(1, d/beta); the sum equals
    the source table on integer distances in [1, source_N).
    """

    terms: list[tuple[float, int]]
    source_N: int

    def reconstruct(self, d: int) -> float:
        if d < 0:
            raise DistanceOutOfDomain(0, d, self.source_N)
        return math.fsum(a * min(1.0, d / b) for a, b in self.terms)


@dataclass
class JumpHistogram:
    """Counts of jumps with distance in [2^i, 2^(i+1)), plus zero-distance moves."""

    buckets: list[int]
    zero_jumps: int

    def total(self) -> int:
        return sum(self.buckets) + self.zero_jumps


def make_locality(kind: str, params: dict | None = None, N: int = 1) -> LocalityFunction:
    """Build one of the stock families: ram, linear, log, sqrt, block."""
    params = params or {}
    if N < 1:
        raise InvalidParam("N", "must be >= 1")
    if kind == "ram":
        values = [0.0] + [1.0] * N
    elif kind == "linear":
        values = [float(d) for d in range(N + 1)]
    elif kind == "log":
        values = [0.0] + [1.0 + math.log2(d) for d in range(1, N + 1)]
    elif kind == "sqrt":
        values = [math.sqrt(d) for d in range(N + 1)]
    elif kind == "block":
        B = params.get("B")
        if B is None or B < 1:
            raise InvalidParam("B", "block family needs B >= 1")
        values = [min(1.0, d / B) for d in range(N + 1)]
        return LocalityFunction(N, values, f"block(B={B})")
    else:
        raise InvalidParam("kind", f"unknown family {kind!r}")
    return LocalityFunction(N, values, kind)


def validate(ell: LocalityFunction) -> ValidityReport:
    """Exhaustively check ell(0)=0, monotonicity, and subadditivity.

    Violations are reported as data, one tuple (x, y, detail) each; the
    subadditivity sweep covers every pair x+y <= N.
    """
    v = np.asarray(ell.values, dtype=float)
    violations: list[tuple[int, int, str]] = []
    if v[0] != 0.0:
        violations.append((0, 0, f"ell(0)={v[0]} != 0"))
    if np.any(v < 0):
        d = int(np.argmax(v < 0))
        violations.append((d, d, f"ell({d})={v[d]} < 0"))
    drops = np.nonzero(v[1:] < v[:-1] - _CURVATURE_SLACK)[0]
    for d in drops:
        violations.append((int(d), int(d) + 1, f"ell({d})={v[d]} > ell({d + 1})={v[d + 1]}"))
    N = ell.N
    for x in range(1, N // 2 + 1):
        y_hi = N - x
        if y_hi < x:
            break
        lhs = v[2 * x : x + y_hi + 1]
        rhs = v[x] + v[x : y_hi + 1]
        bad = np.nonzero(lhs > rhs + _CURVATURE_SLACK)[0]
        for j in bad:
            y = x + int(j)
            violations.append(
                (x, y, f"ell({x + y})={v[x + y]} > ell({x})+ell({y})={v[x] + v[y]}")
            )
    return ValidityReport(valid=not violations, violations=violations)


def lor_cost(seq: ExecutionSequence, ell: LocalityFunction) -> float:
    """Sum ell over consecutive jump distances; the first access is free."""
    acc = seq.accesses
    values = ell.values
    N = ell.N
    terms = []
    for i in range(1, len(acc)):
        d = abs(acc[i] - acc[i - 1])
        if d > N:
            raise DistanceOutOfDomain(i + 1, d, N)
        terms.append(values[d])
    return math.fsum(terms)


def decompose(ell: LocalityFunction) -> Decomposition:
    """Split a concave-on-integers table into block-threshold terms.

    Term i carries weight i * (2*ell(i) - ell(i+1) - ell(i-1)) at threshold i,
    with the table extended flat past N for the boundary term. Tables whose
    second difference dips below -1e-12 are rejected; round-off negatives are
    clamped to zero.
    """
    N = ell.N
    v = ell.values
    terms: list[tuple[float, int]] = []
    for i in range(1, N + 1):
        nxt = v[N] if i + 1 > N else v[i + 1]
        gamma = 2 * v[i] - nxt - v[i - 1]
        if gamma < -_CURVATURE_SLACK:
            raise NotConcave(i, gamma)
        if gamma <= 0.0:
            continue
        terms.append((i * gamma, i))
    return Decomposition(terms, N)


class _TermEvaluator:
    """Evaluates sum of alpha*min(1, d/beta) in O(log #terms) per distance."""

    def __init__(self, dec: Decomposition):
        ordered = sorted(dec.terms, key=lambda t: t[1])
        self.betas = [b for _, b in ordered]
        alphas = np.array([a for a, _ in ordered], dtype=float)
        slopes = np.array([a / b for a, b in ordered], dtype=float)
        # prefix[k] = sum of first k alphas; suffix[k] = sum of slopes from k on
        self.alpha_prefix = np.concatenate([[0.0], np.cumsum(alphas)])
        self.slope_suffix = np.concatenate([np.cumsum(slopes[::-1])[::-1], [0.0]])

    def __call__(self, d: int) -> float:
        k = bisect.bisect_right(self.betas, d)
        return float(self.alpha_prefix[k] + d * self.slope_suffix[k])


def combined_lor_cost(seq: ExecutionSequence, dec: Decomposition) -> float:
    """Trace cost under the weighted sum of a decomposition's terms.

    Equals lor_cost under the source table (to round-off) whenever every
    transition distance stays below source_N.
    """
    acc = seq.accesses
    evaluator = _TermEvaluator(dec)
    terms = []
    for i in range(1, len(acc)):
        d = abs(acc[i] - acc[i - 1])
        if d >= dec.source_N:
            raise DistanceOutOfDomain(i + 1, d, dec.source_N - 1)
        terms.append(evaluator(d))
    return math.fsum(terms)


def jump_histogram(seq: ExecutionSequence) -> JumpHistogram:
    acc = seq.accesses
    buckets: list[int] = []
    zero = 0
    for i in range(1, len(acc)):
        d = abs(acc[i] - acc[i - 1])
        if d == 0:
            zero += 1
            continue
        b = d.bit_length() - 1
        if b >= len(buckets):
            buckets.extend([0] * (b - len(buckets) + 1))
        buckets[b] += 1
    return JumpHistogram(buckets, zero)


def load_locality(source: IO[str], family_tag: str = "file") -> LocalityFunction:
    """Read the CSV table format: header `d,value`, rows for d = 0..N in order."""
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["d", "value"]:
        raise InvalidParam("header", "expected 'd,value'")
    values = []
    for row_no, row in enumerate(reader):
        if not row:
            continue
        if int(row[0]) != row_no:
            raise InvalidParam("d", f"row {row_no} has d={row[0]}, want {row_no}")
        values.append(float(row[1]))
    if len(values) < 2:
        raise InvalidParam("values", "need rows for at least d=0 and d=1")
    return LocalityFunction(len(values) - 1, values, family_tag)


def save_locality(ell: LocalityFunction, sink: IO[str]) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["d", "value"])
    for d, value in enumerate(ell.values):
        writer.writerow([d, repr(value)])

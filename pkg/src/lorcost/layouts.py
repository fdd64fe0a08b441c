"""Full-BST memory embeddings and the traces their searches generate.

Nodes are heap-indexed 1..n (children of v are 2v and 2v+1). A layout maps
nodes to memory positions [0, n); search traces are the position sequences
of root-to-leaf walks. The van Emde Boas layout recurses on height halves
(top ceil(H/2) levels first, then the bottom subtrees left to right), which
keeps every search path's jumps short at all scales. A brute-force sweep
over all leaves gives exact worst-case search costs, and a selection-trace
generator models rank selection on a tape.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import InvalidParam, InvalidRank, NotALeaf, NotForward
from .locality import LocalityFunction, lor_cost
from .trace import ExecutionSequence

__all__ = [
    "FullBST",
    "Layout",
    "SpanStats",
    "build_layout",
    "is_forward",
    "search_trace",
    "worst_case_search_cost",
    "veb_closed_form",
    "span_stats",
    "median_trace",
    "save_layout",
]

_MAX_HEIGHT = 24


@dataclass(frozen=True)
class FullBST:
    """Full binary search tree of height d, nodes heap-indexed 1..2^d-1."""

    d: int

    def __post_init__(self):
        if not 1 <= self.d <= _MAX_HEIGHT:
            raise InvalidParam("d", f"height must be in [1, {_MAX_HEIGHT}]")

    @property
    def n(self) -> int:
        return (1 << self.d) - 1

    def leaves(self) -> range:
        return range(1 << (self.d - 1), 1 << self.d)

    def is_leaf(self, v: int) -> bool:
        return (1 << (self.d - 1)) <= v < (1 << self.d)


@dataclass(frozen=True)
class Layout:
    """Bijection node -> memory position for a full BST."""

    tree: FullBST
    position: tuple[int, ...]  # indexed by heap index - 1
    kind: str
    forward: bool

    def pos(self, v: int) -> int:
        return self.position[v - 1]


@dataclass
class SpanStats:
    mean_span: float
    max_span: int
    min_span: int


def _veb_order(root: int, height: int, out: list[int]) -> None:
    if height == 1:
        out.append(root)
        return
    top = (height + 1) // 2
    bottom = height - top
    _veb_order(root, top, out)
    first = root << top
    for j in range(1 << top):
        _veb_order(first + j, bottom, out)


def _preorder(root: int, height: int, out: list[int]) -> None:
    out.append(root)
    if height > 1:
        _preorder(2 * root, height - 1, out)
        _preorder(2 * root + 1, height - 1, out)


def _inorder(root: int, height: int, out: list[int]) -> None:
    if height > 1:
        _inorder(2 * root, height - 1, out)
        out.append(root)
        _inorder(2 * root + 1, height - 1, out)
    else:
        out.append(root)


def build_layout(kind: str, d: int) -> Layout:
    tree = FullBST(d)
    order: list[int] = []
    if kind == "veb":
        _veb_order(1, d, order)
    elif kind == "bfs":
        order = list(range(1, tree.n + 1))
    elif kind == "preorder":
        _preorder(1, d, order)
    elif kind == "inorder":
        _inorder(1, d, order)
    else:
        raise InvalidParam("kind", f"unknown layout kind {kind!r}")
    position = [0] * tree.n
    for p, node in enumerate(order):
        position[node - 1] = p
    layout = Layout(tree, tuple(position), kind, False)
    return Layout(tree, tuple(position), kind, is_forward(layout))


def is_forward(layout: Layout) -> bool:
    """True iff every internal node sits at a lower position than both children."""
    tree = layout.tree
    half = tree.n // 2
    for v in range(1, half + 1):
        pv = layout.pos(v)
        if pv >= layout.pos(2 * v) or pv >= layout.pos(2 * v + 1):
            return False
    return True


def search_trace(layout: Layout, leaf: int) -> ExecutionSequence:
    """Positions of the root-to-leaf path, in path order."""
    tree = layout.tree
    if not tree.is_leaf(leaf):
        raise NotALeaf(f"{leaf} is not a leaf of a height-{tree.d} tree")
    path = [layout.pos(leaf >> k) for k in range(tree.d - 1, -1, -1)]
    return ExecutionSequence(path, f"{layout.kind}(d={tree.d})/leaf={leaf}")


def _all_search_positions(layout: Layout) -> np.ndarray:
    """(leaf_count, d) matrix of path positions, leaves in increasing order."""
    tree = layout.tree
    leaves = np.arange(1 << (tree.d - 1), 1 << tree.d, dtype=np.int64)
    pos = np.asarray(layout.position, dtype=np.int64)
    cols = [pos[(leaves >> k) - 1] for k in range(tree.d - 1, -1, -1)]
    return np.stack(cols, axis=1)


def worst_case_search_cost(layout: Layout, ell: LocalityFunction) -> tuple[float, int]:
    """Exact max of lor_cost over all leaf searches; ties go to the lowest leaf."""
    tree = layout.tree
    if tree.d == 1:
        return 0.0, 1
    paths = _all_search_positions(layout)
    jumps = np.abs(np.diff(paths, axis=1))
    if int(jumps.max()) > ell.N:
        # route through lor_cost for the contractual error
        lor_cost(search_trace(layout, int(np.argmax(jumps.max(axis=1))) + (1 << (tree.d - 1))), ell)
    table = np.asarray(ell.values, dtype=float)
    costs = table[jumps].sum(axis=1)
    best = int(np.argmax(costs))
    return float(costs[best]), best + (1 << (tree.d - 1))


def veb_closed_form(n: int, ell: LocalityFunction) -> float:
    """log2(n) * sum over k of 2^-k * ell(min(n, 2^(2^k))), k up to ceil(log2 log2 n)."""
    if n < 1 or (n + 1) & n != 0:
        raise InvalidParam("n", "must be 2^d - 1")
    if n == 1:
        return 0.0
    log_n = math.log2(n)
    k_max = math.ceil(math.log2(log_n))
    total = 0.0
    for k in range(k_max + 1):
        d = min(n, 1 << (1 << k))
        total += ell(d) / (1 << k)
    return log_n * total


def span_stats(layout: Layout) -> SpanStats:
    """Span of each leaf search (leaf position minus root position), aggregated."""
    if not layout.forward:
        raise NotForward(f"{layout.kind}(d={layout.tree.d}) is not a forward layout")
    tree = layout.tree
    pos = np.asarray(layout.position, dtype=np.int64)
    spans = pos[np.arange(1 << (tree.d - 1), 1 << tree.d) - 1] - layout.pos(1)
    return SpanStats(float(spans.mean()), int(spans.max()), int(spans.min()))


def median_trace(values: list, rank: int) -> ExecutionSequence:
    """Address trace of five-way chunked rank selection on a tape.

    The input occupies [0, n). Chunks of five are scanned, each chunk median
    is written out to a fresh tail region past the live data, the pivot is
    found by recursing on that tail, and one partition pass copies the
    surviving side to another fresh region for the next round. Every element
    read or write appends its address; comparisons are free.
    """
    n = len(values)
    if n == 0:
        raise InvalidRank(rank, 0)
    if not 0 <= rank < n:
        raise InvalidRank(rank, n)
    tape: list = list(values)
    accesses: list[int] = []

    def read(addr: int):
        accesses.append(addr)
        return tape[addr]

    def write(addr: int, value) -> None:
        accesses.append(addr)
        if addr == len(tape):
            tape.append(value)
        elif addr < len(tape):
            tape[addr] = value
        else:
            raise AssertionError("non-contiguous tape growth")

    def select(lo: int, hi: int, want: int):
        m = hi - lo
        if m <= 5:
            chunk = [read(a) for a in range(lo, hi)]
            return sorted(chunk)[want]
        medians_base = len(tape)
        count = 0
        for start in range(lo, hi, 5):
            stop = min(start + 5, hi)
            chunk = [read(a) for a in range(start, stop)]
            write(medians_base + count, sorted(chunk)[(len(chunk) - 1) // 2])
            count += 1
        pivot = select(medians_base, medians_base + count, (count - 1) // 2)
        below: list = []
        above: list = []
        equal = 0
        for a in range(lo, hi):
            v = read(a)
            if v < pivot:
                below.append(v)
            elif v > pivot:
                above.append(v)
            else:
                equal += 1
        if want < len(below):
            side, want_next = below, want
        elif want < len(below) + equal:
            return pivot
        else:
            side, want_next = above, want - len(below) - equal
        side_base = len(tape)
        for off, v in enumerate(side):
            write(side_base + off, v)
        return select(side_base, side_base + len(side), want_next)

    found = select(0, n, rank)
    if found != sorted(values)[rank]:
        raise AssertionError("selection simulation drifted from its answer")
    return ExecutionSequence(accesses, f"median_trace(n={n},rank={rank})")


def save_layout(layout: Layout, sink: IO[str]) -> None:
    """Write the CSV dump format: header `heap_index,position`."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["heap_index", "position"])
    for v in range(1, layout.tree.n + 1):
        writer.writerow([v, layout.pos(v)])

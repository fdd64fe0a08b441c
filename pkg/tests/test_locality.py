"""Locality-function families, validation, costs, and the threshold split."""

import io
import math
import random
from fractions import Fraction

import pytest

from lorcost import cache, locality, trace
from lorcost.errors import DistanceOutOfDomain, InvalidParam, NotConcave


def test_family_values():
    ram = locality.make_locality("ram", {}, 8)
    assert ram(0) == 0 and ram(7) == 1
    log = locality.make_locality("log", {}, 8)
    assert log(1) == 1 and log(8) == 4
    blk = locality.make_locality("block", {"B": 4}, 8)
    assert blk(3) == 0.75
    lin = locality.make_locality("linear", {}, 8)
    assert lin(5) == 5
    sq = locality.make_locality("sqrt", {}, 9)
    assert sq(9) == 3


def test_make_locality_errors():
    with pytest.raises(InvalidParam):
        locality.make_locality("block", {}, 8)
    with pytest.raises(InvalidParam):
        locality.make_locality("nosuch", {}, 8)
    with pytest.raises(InvalidParam):
        locality.make_locality("ram", {}, 0)


@pytest.mark.parametrize("kind,params", [
    ("ram", {}), ("linear", {}), ("log", {}), ("sqrt", {}),
    ("block", {"B": 2}), ("block", {"B": 7}),
])
def test_families_are_valid(kind, params):
    report = locality.validate(locality.make_locality(kind, params, 64))
    assert report.valid, report.violations[:3]


def test_validate_superadditive_table():
    table = locality.LocalityFunction(4, [float(d * d) for d in range(5)], "square")
    report = locality.validate(table)
    assert not report.valid
    assert (1, 1, "ell(2)=4.0 > ell(1)+ell(1)=2.0") in report.violations


def test_validate_nonzero_origin():
    table = locality.LocalityFunction(2, [1.0, 1.0, 1.0])
    report = locality.validate(table)
    assert not report.valid
    assert any("ell(0)" in v[2] for v in report.violations)


def test_validate_decreasing_table():
    table = locality.LocalityFunction(2, [0.0, 2.0, 1.0])
    assert not locality.validate(table).valid


def test_lor_cost_scan_linear():
    ell = locality.make_locality("linear", {}, 16)
    assert locality.lor_cost(trace.scan(8), ell) == 7


def test_lor_cost_matches_shift_enumeration():
    # independent oracle: mean block-crossing count over all four shifts
    E = trace.ExecutionSequence([0, 3])
    ell = locality.make_locality("block", {"B": 4}, 8)
    shifts = [cache.co_cost_query(E, 4, s) for s in range(4)]
    assert locality.lor_cost(E, ell) == sum(shifts) / 4 == 0.75


def test_lor_cost_binary_search_log_scaling():
    n = 1023
    ell = locality.make_locality("log", {}, n)
    worst = max(
        locality.lor_cost(trace.binary_search(n, t), ell) for t in range(n)
    )
    ratio = worst / math.log2(n) ** 2
    assert 0.3 <= ratio <= 1.5


def test_lor_cost_domain_error():
    ell = locality.make_locality("ram", {}, 4)
    with pytest.raises(DistanceOutOfDomain):
        locality.lor_cost(trace.ExecutionSequence([0, 5]), ell)


def test_lor_cost_edge_traces():
    ell = locality.make_locality("ram", {}, 4)
    assert locality.lor_cost(trace.ExecutionSequence([]), ell) == 0
    assert locality.lor_cost(trace.ExecutionSequence([3]), ell) == 0


def test_decompose_block():
    dec = locality.decompose(locality.make_locality("block", {"B": 2}, 8))
    assert dec.terms == [(1.0, 2)]
    ell = locality.make_locality("block", {"B": 2}, 8)
    for d in range(1, 8):
        assert dec.reconstruct(d) == ell(d)


def test_decompose_linear_and_ram():
    assert locality.decompose(locality.make_locality("linear", {}, 8)).terms == [(8.0, 8)]
    assert locality.decompose(locality.make_locality("ram", {}, 8)).terms == [(1.0, 1)]


def test_decompose_rejects_convex_table():
    table = locality.LocalityFunction(4, [0.0, 1.0, 2.0, 4.0, 8.0], "convex")
    with pytest.raises(NotConcave) as exc:
        locality.decompose(table)
    assert exc.value.index == 2  # first index with negative second difference


@pytest.mark.parametrize("kind,params", [
    ("ram", {}), ("log", {}), ("sqrt", {}), ("block", {"B": 8}),
])
def test_decompose_reconstruction_exact(kind, params):
    N = 512
    ell = locality.make_locality(kind, params, N)
    dec = locality.decompose(ell)
    ev = locality._TermEvaluator(dec)
    for d in range(1, N):
        assert abs(ev(d) - ell(d)) <= 1e-9


def test_combined_lor_cost_examples():
    lin = locality.decompose(locality.make_locality("linear", {}, 8))
    assert locality.combined_lor_cost(trace.ExecutionSequence([0, 1, 2]), lin) == 2.0
    blk = locality.decompose(locality.make_locality("block", {"B": 4}, 16))
    assert locality.combined_lor_cost(trace.ExecutionSequence([0, 3, 5]), blk) == 1.25
    assert locality.combined_lor_cost(trace.ExecutionSequence([]), blk) == 0


def test_combined_lor_cost_matches_direct_on_random_query_traces():
    rng = random.Random(12)
    N = 256
    for kind, params in [("log", {}), ("sqrt", {}), ("block", {"B": 8})]:
        ell = locality.make_locality(kind, params, N)
        dec = locality.decompose(ell)
        for _ in range(20):
            addrs = sorted(rng.randrange(N - 1) for _ in range(rng.randint(2, 200)))
            seq = trace.ExecutionSequence(addrs)
            direct = locality.lor_cost(seq, ell)
            combined = locality.combined_lor_cost(seq, dec)
            assert abs(direct - combined) <= 1e-9 * max(1.0, direct)


def test_combined_lor_cost_domain_error():
    dec = locality.decompose(locality.make_locality("linear", {}, 8))
    with pytest.raises(DistanceOutOfDomain):
        locality.combined_lor_cost(trace.ExecutionSequence([0, 8]), dec)


def test_lor_cost_concatenation_additive():
    ell = locality.make_locality("sqrt", {}, 64)
    a = trace.ExecutionSequence([0, 9, 4])
    b = trace.ExecutionSequence([20, 22])
    joined = trace.ExecutionSequence(a.accesses + b.accesses)
    junction = ell(abs(b.accesses[0] - a.accesses[-1]))
    assert locality.lor_cost(joined, ell) == pytest.approx(
        locality.lor_cost(a, ell) + locality.lor_cost(b, ell) + junction
    )


def test_jump_histogram():
    h = locality.jump_histogram(trace.scan(9))
    assert h.buckets[0] == 8 and sum(h.buckets) == 8 and h.zero_jumps == 0
    h = locality.jump_histogram(trace.ExecutionSequence([0, 4, 0]))
    assert h.buckets[2] == 2
    h = locality.jump_histogram(trace.ExecutionSequence([5, 5, 5]))
    assert h.zero_jumps == 2 and sum(h.buckets) == 0
    assert locality.jump_histogram(trace.ExecutionSequence([])).total() == 0


def test_jump_histogram_counts_every_transition():
    rng = random.Random(4)
    addrs = [rng.randrange(1000) for _ in range(500)]
    h = locality.jump_histogram(trace.ExecutionSequence(addrs))
    assert h.total() == 499


def test_dyadic_bound_brackets_smoothed_cost():
    rng = random.Random(9)
    for B in (1, 2, 4, 8, 16, 64):
        for _ in range(10):
            addrs = sorted(rng.randrange(2048) for _ in range(rng.randint(10, 400)))
            seq = trace.ExecutionSequence(addrs)
            h = locality.jump_histogram(seq)
            bound = sum(
                count * Fraction(min(1 << i, B), B)
                for i, count in enumerate(h.buckets)
            )
            sm = cache.smoothed_co_query(seq, B)
            assert bound / 2 <= sm <= 2 * bound


def test_locality_csv_round_trip():
    ell = locality.make_locality("sqrt", {}, 12)
    buf = io.StringIO()
    locality.save_locality(ell, buf)
    back = locality.load_locality(io.StringIO(buf.getvalue()))
    assert back.N == ell.N
    assert back.values == ell.values


def test_load_locality_rejects_bad_header():
    with pytest.raises(InvalidParam):
        locality.load_locality(io.StringIO("x,y\n0,0\n1,1\n"))

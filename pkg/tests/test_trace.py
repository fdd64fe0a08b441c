"""Trace loading, saving, and the structured generators."""

import io

import pytest

from lorcost import trace
from lorcost.errors import InvalidParam, NegativeAddress, ParseError


def test_load_trace_plain():
    seq = trace.load_trace(io.StringIO("0\n5\n2\n"))
    assert seq.accesses == [0, 5, 2]


def test_load_trace_skips_comments_and_blanks():
    seq = trace.load_trace(io.StringIO("# comment\n\n7\n"))
    assert seq.accesses == [7]


def test_load_trace_negative_address_reports_line():
    with pytest.raises(NegativeAddress) as exc:
        trace.load_trace(io.StringIO("3\n-1\n"))
    assert exc.value.line_no == 2


def test_load_trace_bad_token_reports_line():
    with pytest.raises(ParseError) as exc:
        trace.load_trace(io.StringIO("1\nx7\n"))
    assert exc.value.line_no == 2
    assert exc.value.token == "x7"


def test_save_load_round_trip():
    seq = trace.ExecutionSequence([0, 3, 3, 9], "roundtrip")
    buf = io.StringIO()
    trace.save_trace(seq, buf)
    assert buf.getvalue().endswith("\n")
    back = trace.load_trace(io.StringIO(buf.getvalue()))
    assert back.accesses == seq.accesses


@pytest.mark.parametrize("accs,expected", [
    ([0, 1, 2], True),
    ([0, 2, 1], False),
    ([], True),
    ([4, 4, 4], True),
])
def test_is_query_type(accs, expected):
    assert trace.is_query_type(trace.ExecutionSequence(accs)) is expected


def test_scan():
    assert trace.scan(4).accesses == [0, 1, 2, 3]
    assert trace.scan(3, start=5).accesses == [5, 6, 7]
    assert trace.is_query_type(trace.scan(100))


def test_strided():
    assert trace.strided(4, 3, start=1).accesses == [1, 4, 7, 10]


def test_stage_halving_hand_expansion():
    assert trace.stage_halving(8).accesses == [0, 8, 4, 2, 6, 1, 3, 5, 7]


def test_stage_halving_rejects_non_power_of_two():
    with pytest.raises(InvalidParam):
        trace.stage_halving(6)


def test_stage_halving_not_query_type():
    assert not trace.is_query_type(trace.stage_halving(8))


def test_binary_search_midpoint_descent():
    assert trace.binary_search(7, 0).accesses == [3, 1, 0]
    assert trace.binary_search(7, 6).accesses == [3, 5, 6]
    assert trace.binary_search(1, 0).accesses == [0]


def test_repeated_scan():
    assert trace.repeated_scan(3, 2).accesses == [0, 1, 2, 0, 1, 2]


def test_disjoint_scan_shape():
    for s, ell in [(2, 4), (5, 3), (8, 16), (64, 64)]:
        seq = trace.disjoint_scan(s, ell, seed=3)
        assert len(seq) == s * ell
        assert sorted(seq.accesses) == list(range(s * ell))
        non_unit = sum(
            1 for a, b in zip(seq.accesses, seq.accesses[1:]) if abs(b - a) != 1
        )
        assert non_unit == s - 1


def test_disjoint_scan_deterministic():
    a = trace.disjoint_scan(10, 7, seed=99)
    b = trace.disjoint_scan(10, 7, seed=99)
    assert a.accesses == b.accesses
    c = trace.disjoint_scan(10, 7, seed=100)
    assert c.accesses != a.accesses


def test_disjoint_scan_impossible_arrangement():
    # two single-word sections always sit one word apart
    with pytest.raises(InvalidParam):
        trace.disjoint_scan(2, 1)


def test_generate_dispatch_and_purity():
    spec = trace.TraceGenSpec("scan", {"n": 4, "start": 0})
    assert trace.generate(spec).accesses == trace.generate(spec).accesses == [0, 1, 2, 3]
    with pytest.raises(InvalidParam):
        trace.generate(trace.TraceGenSpec("nosuch", {}))
    with pytest.raises(InvalidParam):
        trace.generate(trace.TraceGenSpec("scan", {"n": 4, "bogus": 1}))
    with pytest.raises(InvalidParam):
        trace.generate(trace.TraceGenSpec("scan", {"n": 0}))


def test_negative_address_rejected_at_construction():
    with pytest.raises(NegativeAddress):
        trace.ExecutionSequence([1, -2])

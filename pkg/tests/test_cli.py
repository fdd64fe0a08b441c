"""Command-line behavior: outputs, exit codes, file formats."""

import json
import os

import pytest

from lorcost import cli, trace


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_trace(path, accesses):
    with open(path, "w", encoding="utf-8") as fh:
        trace.save_trace(trace.ExecutionSequence(list(accesses)), fh)


def test_gen_trace_scan_writes_file(tmp_path, capsys):
    out = tmp_path / "scan4.txt"
    code, _, _ = run_cli(capsys, "gen", "trace", "scan", "--n", "4", "--out", str(out))
    assert code == 0
    assert out.read_text() == "0\n1\n2\n3\n"


def test_gen_round_trip_reproduces_trace(tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, _, _ = run_cli(capsys, "gen", "trace", "disjoint_scan",
                         "--section-count", "6", "--section-length", "5",
                         "--seed", "3", "--out", str(out))
    assert code == 0
    with open(out, encoding="utf-8") as fh:
        loaded = trace.load_trace(fh)
    assert loaded.accesses == trace.disjoint_scan(6, 5, seed=3).accesses


def test_gen_layout_veb(tmp_path, capsys):
    out = tmp_path / "veb3.csv"
    code, _, _ = run_cli(capsys, "gen", "layout", "veb", "--d", "3", "--out", str(out))
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "heap_index,position"
    assert len(lines) == 8
    assert lines[1] == "1,0"


def test_gen_bad_params_exit_2(capsys):
    code, _, err = run_cli(capsys, "gen", "trace", "stage_halving", "--B", "6")
    assert code == 2
    assert "power of two" in err


def test_cost_co_single_shift(tmp_path, capsys):
    path = tmp_path / "scan8.txt"
    write_trace(path, range(8))
    code, out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "co",
                           "--B", "2", "--shift", "0")
    assert code == 0
    assert "co total = 3" in out


def test_cost_co_json_and_text_agree(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 3])
    code, out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "co",
                           "--B", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == "1"
    assert doc["results"]["total"] == 0.75
    assert doc["results"]["total_exact"] == "3/4"
    code, text_out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "co",
                                "--B", "4")
    assert str(doc["results"]["total"]) in text_out


def test_cost_bidim_worked_example(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 4, 2])
    code, out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "bidim",
                           "--M", "16", "--B", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["total"] == 2.0
    assert doc["results"]["per_access"] == [1.0, 1.0, 0.0]


def test_cost_missing_flag_exit_2(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 1])
    code, _, err = run_cli(capsys, "cost", "--trace", str(path), "--model", "co")
    assert code == 2
    assert "--B" in err


def test_cost_precondition_exit_3(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [2, 1])  # not query-type
    code, _, err = run_cli(capsys, "cost", "--trace", str(path), "--model", "co", "--B", "2")
    assert code == 3
    assert "NotQueryType" in err


def test_cost_lru_and_hierarchy(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 4, 0, 4])
    code, out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "lru",
                           "--M", "8", "--B", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["results"]["total"] == 2.0

    hier = tmp_path / "h.csv"
    hier.write_text("M,B,C\n16,4,1\n")
    code, out, _ = run_cli(capsys, "cost", "--trace", str(path), "--model", "hierarchy",
                           "--hierarchy", str(hier), "--level-model", "lru",
                           "--format", "json")
    assert code == 0
    assert json.loads(out)["results"]["total"] == 2.0


def test_plotdata_rows(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 4, 2])
    code, out, _ = run_cli(capsys, "plotdata", "--trace", str(path), "--M", "16", "--B", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,address,time,cost"
    assert lines[1] == "1,0,0.0,1.0"
    assert lines[2] == "2,4,1.0,1.0"
    assert lines[3] == "3,2,2.0,0.0"


def test_plotdata_empty_trace_header_only(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing\n")
    code, out, _ = run_cli(capsys, "plotdata", "--trace", str(path), "--M", "16", "--B", "4")
    assert code == 0
    assert out == "index,address,time,cost\n"


def test_plotdata_tall_cache_exit_3(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 1])
    code, _, err = run_cli(capsys, "plotdata", "--trace", str(path), "--M", "4", "--B", "4")
    assert code == 3
    assert "TallCacheViolation" in err


def test_plotdata_renders_figure(tmp_path, capsys):
    path = tmp_path / "t.txt"
    write_trace(path, [0, 4, 2, 9, 1])
    fig = tmp_path / "fig.png"
    csv_out = tmp_path / "rows.csv"
    code, _, _ = run_cli(capsys, "plotdata", "--trace", str(path), "--M", "16", "--B", "4",
                         "--out", str(csv_out), "--fig", str(fig))
    assert code == 0
    assert csv_out.read_text().startswith("index,address,time,cost")
    assert fig.stat().st_size > 1000  # non-trivial PNG next to the CSV


def test_check_passing_suite_exit_0(capsys):
    code, out, _ = run_cli(capsys, "check", "--suite", "bstability", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["passed"] is True
    assert doc["results"]["suites"][0]["check_id"] == "bstability"


def test_check_failing_suite_exit_1_with_witnesses(capsys):
    code, out, _ = run_cli(capsys, "check", "--suite", "equiv_lr", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    suite = doc["results"]["suites"][0]
    assert suite["cases_run"] >= 100
    assert suite["witnesses"]


def test_check_unknown_suite_exit_2(capsys):
    code, _, err = run_cli(capsys, "check", "--suite", "nosuch")
    assert code == 2
    assert "nosuch" in err


def test_check_thread_env_var(capsys, monkeypatch):
    monkeypatch.setenv("LORCOST_THREADS", "2")
    code_a, out_a, _ = run_cli(capsys, "check", "--suite", "smoothing", "--format", "json")
    monkeypatch.setenv("LORCOST_THREADS", "1")
    code_b, out_b, _ = run_cli(capsys, "check", "--suite", "smoothing", "--format", "json")
    assert code_a == code_b == 0
    assert out_a == out_b  # canonical output regardless of schedule


def test_console_script_installed():
    import shutil
    import subprocess

    exe = shutil.which("lorcost")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run([exe, "gen", "trace", "scan", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "0\n1\n2\n"

"""Command-line surface: cost evaluation, trace/layout generation, check
suites, and space-time plot data (CSV, with an optional rendered figure).

Exit codes: 0 ok, 1 check failure, 2 usage error, 3 model precondition
failure. All randomness flows through --seed; smoothing is always exact
enumeration (--shift all), never sampling.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__, bidim, cache, checks, hierarchy, layouts, locality, trace
from .errors import InvalidParam, LorcostError

_USAGE_EXIT = 2
_PRECONDITION_EXIT = 3


def _report(command: str, inputs: dict, results: dict, seed=None) -> dict:
    return {
        "schema_version": "1",
        "command": command,
        "inputs": inputs,
        "results": results,
        "provenance": {"tool": f"lorcost {__version__}", "seed": seed},
    }


def _emit(doc: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha1(fh.read()).hexdigest()[:12]


def _load_trace(path: str) -> trace.ExecutionSequence:
    with open(path, "r", encoding="utf-8") as fh:
        return trace.load_trace(fh, label=os.path.basename(path))


def _parse_shift(value: str):
    if value == "all":
        return "all"
    try:
        return int(value)
    except ValueError:
        raise InvalidParam("shift", "must be an integer or 'all'") from None


def _make_ell(spec: str, N: int) -> locality.LocalityFunction:
    if spec.startswith("block:"):
        return locality.make_locality("block", {"B": int(spec.split(":", 1)[1])}, N)
    if spec.startswith("file:"):
        with open(spec.split(":", 1)[1], "r", encoding="utf-8") as fh:
            return locality.load_locality(fh)
    return locality.make_locality(spec, {}, N)


def _threads() -> int:
    raw = os.environ.get("LORCOST_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def cmd_cost(args) -> int:
    seq = _load_trace(args.trace)
    inputs = {"trace": args.trace, "trace_sha1": _file_digest(args.trace),
              "model": args.model}
    results: dict = {"model": args.model, "accesses": len(seq)}
    lines = []
    if args.model == "lor":
        if args.ell is None:
            print("cost: --model lor requires --ell", file=sys.stderr)
            return _USAGE_EXIT
        max_d = max((abs(b - a) for a, b in zip(seq.accesses, seq.accesses[1:])), default=1)
        ell = _make_ell(args.ell, max(1, max_d))
        per = [0.0] + [ell(abs(b - a)) for a, b in zip(seq.accesses, seq.accesses[1:])]
        total = locality.lor_cost(seq, ell)
        results.update(ell=ell.family_tag, total=total, per_access=per)
        lines.append(f"lor total = {total}")
    elif args.model == "co":
        if args.B is None:
            print("cost: --model co requires --B", file=sys.stderr)
            return _USAGE_EXIT
        shift = _parse_shift(args.shift)
        inputs["B"] = args.B
        if shift == "all":
            total = cache.smoothed_co_query(seq, args.B)
            results.update(B=args.B, shift="all", total=float(total),
                           total_exact=str(total))
            lines.append(f"smoothed co total = {float(total)} ({total})")
        else:
            total = cache.co_cost_query(seq, args.B, shift)
            results.update(B=args.B, shift=shift, total=total)
            lines.append(f"co total = {total}")
    elif args.model in ("lru", "belady"):
        if args.B is None or args.M is None:
            print(f"cost: --model {args.model} requires --M and --B", file=sys.stderr)
            return _USAGE_EXIT
        cfg = cache.CacheConfig(args.M, args.B, args.model)
        shift = _parse_shift(args.shift)
        inputs.update(B=args.B, M=args.M)
        if shift == "all":
            total = cache.smoothed_cost(seq, cfg)
            results.update(B=args.B, M=args.M, shift="all", total=float(total),
                           total_exact=str(total))
            lines.append(f"smoothed {args.model} misses = {float(total)} ({total})")
        else:
            sim = cache.simulate(seq, cfg, shift)
            results.update(B=args.B, M=args.M, shift=shift, total=sim.total_misses,
                           per_access=sim.per_access,
                           evictions=[list(e) for e in sim.evictions])
            lines.append(f"{args.model} misses = {sim.total_misses}")
    elif args.model == "bidim":
        if args.B is None or args.M is None:
            print("cost: --model bidim requires --M and --B", file=sys.stderr)
            return _USAGE_EXIT
        timed = bidim.two_finger_cost(seq, bidim.make_lmb(args.M, args.B))
        inputs.update(B=args.B, M=args.M)
        results.update(B=args.B, M=args.M, total=timed.total,
                       per_access=timed.per_access_costs, times=timed.times)
        lines.append(f"two-finger total = {timed.total}")
    elif args.model == "hierarchy":
        if args.hierarchy is None:
            print("cost: --model hierarchy requires --hierarchy", file=sys.stderr)
            return _USAGE_EXIT
        with open(args.hierarchy, "r", encoding="utf-8") as fh:
            hier = hierarchy.load_hierarchy(fh)
        total = hierarchy.hierarchy_cost(seq, hier, args.level_model)
        inputs.update(hierarchy=args.hierarchy, level_model=args.level_model)
        results.update(level_model=args.level_model, levels=len(hier), total=total)
        lines.append(f"hierarchy total ({args.level_model}) = {total}")
    _emit(_report("cost", inputs, results), args.format, lines)
    return 0


_TRACE_FLAG_MAP = {
    "scan": {"n": "n", "start": "start"},
    "strided": {"count": "count", "stride": "stride", "start": "start"},
    "stage_halving": {"B": "B"},
    "disjoint_scan": {"section_count": "section_count",
                      "section_length": "section_length", "seed": "seed"},
    "binary_search": {"n": "n", "target": "target"},
    "repeated_scan": {"k": "k", "reps": "repetitions"},
}


def cmd_gen(args) -> int:
    if args.what == "trace":
        flag_map = _TRACE_FLAG_MAP[args.kind]
        params = {}
        for flag, param in flag_map.items():
            value = getattr(args, flag, None)
            if value is not None:
                params[param] = value
        seq = trace.generate(trace.TraceGenSpec(args.kind, params))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                trace.save_trace(seq, fh)
        else:
            trace.save_trace(seq, sys.stdout)
    else:
        layout = layouts.build_layout(args.kind, args.d)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                layouts.save_layout(layout, fh)
        else:
            layouts.save_layout(layout, sys.stdout)
    return 0


def cmd_check(args) -> int:
    config = checks.CheckConfig(seed=args.seed)
    if args.suite == "all":
        names = list(checks.SUITES)
    elif args.suite in checks.SUITES:
        names = [args.suite]
    else:
        print(f"check: unknown suite {args.suite!r}", file=sys.stderr)
        return _USAGE_EXIT
    workers = min(_threads(), len(names))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda n: checks.run_suite(n, config), names))
    else:
        reports = [checks.run_suite(n, config) for n in names]
    results = {"suites": [r.to_dict() for r in reports],
               "passed": all(r.passed for r in reports)}
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.check_id}: {r.cases_passed}/{r.cases_run}"
                     + (f" worst_violation={r.worst_violation:.3g}" if not r.passed else ""))
        for digest, lhs, rhs in r.witnesses[:3]:
            lines.append(f"  witness {digest}: {lhs} vs {rhs}")
    _emit(_report("check", {"suite": args.suite}, results, seed=args.seed),
          args.format, lines)
    return 0 if results["passed"] else 1


def _render_figure(timed: bidim.TimedTrace, path: str, M: int, B: int) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    xs = list(timed.seq.accesses)
    ys = timed.times
    sc = ax.scatter(xs, ys, c=timed.per_access_costs, cmap="viridis",
                    vmin=0.0, vmax=1.0, s=18)
    ax.plot(xs, ys, lw=0.4, alpha=0.35, color="gray")
    fig.colorbar(sc, ax=ax, label="access cost")
    ax.set_xlabel("address")
    ax.set_ylabel("time (accumulated cost)")
    ax.set_title(f"space-time trace, M={M} B={B}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_plotdata(args) -> int:
    seq = _load_trace(args.trace)
    timed = bidim.two_finger_cost(seq, bidim.make_lmb(args.M, args.B))
    rows = ["index,address,time,cost"]
    for i, (addr, t, c) in enumerate(
            zip(seq.accesses, timed.times, timed.per_access_costs), start=1):
        rows.append(f"{i},{addr},{t!r},{c!r}")
    out = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    if args.fig:
        _render_figure(timed, args.fig, args.M, args.B)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorcost",
                                     description="memory-locality cost models over access traces")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_cost = sub.add_parser("cost", help="price a trace under a cost model")
    p_cost.add_argument("--trace", required=True)
    p_cost.add_argument("--model", required=True,
                        choices=["lor", "co", "lru", "belady", "bidim", "hierarchy"])
    p_cost.add_argument("--ell", help="ram|linear|log|sqrt|block:B|file:PATH")
    p_cost.add_argument("--B", type=int)
    p_cost.add_argument("--M", type=int)
    p_cost.add_argument("--hierarchy")
    p_cost.add_argument("--level-model", default="lor", choices=["co", "lru", "lor"])
    p_cost.add_argument("--shift", default="all", help="integer shift or 'all'")
    p_cost.add_argument("--format", default="text", choices=["json", "text"])
    p_cost.set_defaults(fn=cmd_cost)

    p_gen = sub.add_parser("gen", help="generate traces and layouts")
    gen_sub = p_gen.add_subparsers(dest="what", required=True)
    g_trace = gen_sub.add_parser("trace")
    g_trace.add_argument("kind", choices=sorted(_TRACE_FLAG_MAP))
    g_trace.add_argument("--n", type=int)
    g_trace.add_argument("--start", type=int)
    g_trace.add_argument("--count", type=int)
    g_trace.add_argument("--stride", type=int)
    g_trace.add_argument("--B", type=int)
    g_trace.add_argument("--section-count", dest="section_count", type=int)
    g_trace.add_argument("--section-length", dest="section_length", type=int)
    g_trace.add_argument("--target", type=int)
    g_trace.add_argument("--k", type=int)
    g_trace.add_argument("--reps", type=int)
    g_trace.add_argument("--seed", type=int, default=0)
    g_trace.add_argument("--out")
    g_layout = gen_sub.add_parser("layout")
    g_layout.add_argument("kind", choices=["veb", "bfs", "preorder", "inorder"])
    g_layout.add_argument("--d", type=int, required=True)
    g_layout.add_argument("--out")
    p_gen.set_defaults(fn=cmd_gen)

    p_check = sub.add_parser("check", help="run verification suites")
    p_check.add_argument("--suite", default="all")
    p_check.add_argument("--seed", type=int, default=7)
    p_check.add_argument("--format", default="text", choices=["json", "text"])
    p_check.set_defaults(fn=cmd_check)

    p_plot = sub.add_parser("plotdata", help="space-time plot data for a trace")
    p_plot.add_argument("--trace", required=True)
    p_plot.add_argument("--M", type=int, required=True)
    p_plot.add_argument("--B", type=int, required=True)
    p_plot.add_argument("--out")
    p_plot.add_argument("--fig", help="also render the space-time figure to this file")
    p_plot.set_defaults(fn=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except LorcostError as exc:
        # bad flag values are usage errors; violated model preconditions are not
        from .errors import InvalidShift

        usage = args.cmd == "gen" or isinstance(exc, (InvalidParam, InvalidShift))
        print(f"{args.cmd}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _USAGE_EXIT if usage else _PRECONDITION_EXIT
    except FileNotFoundError as exc:
        print(f"{args.cmd}: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())

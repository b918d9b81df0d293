"""Command-line driver.

Every JSON document written by a subcommand has three top-level keys in a
fixed order: ``meta`` (wall-clock timestamp and elapsed time, the only
fields that vary between identical runs), ``config`` (the full parsed
command line, seed included) and ``result``.

Exit codes:

    0  success
    2  usage error
    3  unreadable or malformed input graph
    4  part size does not divide the vertex count
    5  a split ran out of attempts
    6  no cycle with the requested orientation exists
    7  search budget exhausted before a verdict
    8  an output failed independent verification
    9  an experiment missed its bound
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
import time
from pathlib import Path

from .edgelist import EdgeListError, format_edgelist, graph_hash, read_edgelist
from .experiments import (
    TailParams,
    reports_to_csv,
    split_success_experiment,
    tail_experiment,
    tail_grid,
)
from .factor import FactorError, FactorRequest, certificate_to_dict, cycle_factor, threshold_report, verify_factor
from .graph import DegreeMode, GraphError, OrientedGraph, min_degree, random_oriented, random_tournament
from .hamilton import (
    DEFAULT_BUDGET,
    DEFAULT_DP_CAP,
    BudgetExhausted,
    CapExceeded,
    OrientationPattern,
    find_cycle_backtrack,
    find_cycle_dp,
    verify_embedding,
)
from .partition import DEFAULT_MAX_ATTEMPTS, AttemptsExhausted, DivisibilityError, recursive_equipartition, verify_partition

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_DIVISIBILITY = 4
EXIT_ATTEMPTS = 5
EXIT_NOT_FOUND = 6
EXIT_BUDGET = 7
EXIT_VERIFY = 8
EXIT_EXPERIMENT = 9

_FACTOR_EXITS = {"partition": EXIT_ATTEMPTS, "not-found": EXIT_NOT_FOUND, "budget": EXIT_BUDGET}


class _InputError(Exception):
    pass


def _graph_from(args) -> OrientedGraph:
    if args.input is not None:
        try:
            return read_edgelist(args.input)
        except (OSError, EdgeListError, GraphError) as exc:
            raise _InputError(str(exc)) from exc
    if args.tournament is not None:
        return random_tournament(args.tournament, args.seed)
    n, p = args.oriented
    return random_oriented(int(n), float(p), args.seed)


def _degree_summary(g: OrientedGraph) -> dict:
    return {
        "n": g.n,
        "e": g.num_edges,
        "semi_degree": min_degree(g, DegreeMode.SEMI),
        "total_degree": min_degree(g, DegreeMode.TOTAL),
    }


def _config(args) -> dict:
    out = {}
    for key, value in vars(args).items():
        if key == "func":
            continue
        if isinstance(value, Path):
            value = str(value)
        elif isinstance(value, DegreeMode):
            value = value.value
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _emit(args, result: dict, started: float) -> None:
    doc = {
        "meta": {
            "generated_at": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
            "elapsed_s": round(time.perf_counter() - started, 6),
        },
        "config": _config(args),
        "result": result,
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def _mode(text: str) -> DegreeMode:
    return DegreeMode(text)


def cmd_gen(args, parser) -> int:
    if args.kind == "tournament":
        if len(args.params) != 1:
            parser.error("usage: gen tournament N")
        g = random_tournament(int(args.params[0]), args.seed)
    else:
        if len(args.params) != 2:
            parser.error("usage: gen oriented N P")
        p = float(args.params[1])
        if not 0.0 <= p <= 1.0:
            parser.error("P must lie in [0, 1]")
        g = random_oriented(int(args.params[0]), p, args.seed)
    text = format_edgelist(g)
    summary = json.dumps(_degree_summary(g))
    if args.out is None:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    else:
        Path(args.out).write_bytes(text.encode("ascii"))
        print(summary)
    return EXIT_OK


def cmd_degree(args, parser) -> int:
    started = time.perf_counter()
    g = _graph_from(args)
    result = _degree_summary(g)
    result["graph_hash"] = graph_hash(g)
    _emit(args, result, started)
    return EXIT_OK


def cmd_partition(args, parser) -> int:
    started = time.perf_counter()
    g = _graph_from(args)
    result = {"graph_hash": graph_hash(g), "n": g.n}
    code = EXIT_OK
    try:
        part = recursive_equipartition(g, args.ell, args.mode, args.seed, args.max_attempts,
                                       best_effort=args.best_effort)
    except DivisibilityError as exc:
        result.update(status="divisibility", error=str(exc))
        code = EXIT_DIVISIBILITY
    except AttemptsExhausted as exc:
        result.update(status="attempts-exhausted", error=str(exc), path=exc.path)
        code = EXIT_ATTEMPTS
    else:
        verdict = verify_partition(g, part, args.mode)
        result["status"] = "below-threshold" if part.below_threshold else "ok"
        result["partition"] = part.to_dict()
        result["block_relative_degrees"] = [float(x) for x in verdict.relative_degrees]
        result["verified"] = verdict.ok
        if part.mode is DegreeMode.TOTAL:
            result["assumption"] = "total-degree splits reuse the semi-degree error term 2 n^(-1/3)"
        if not verdict.ok:
            code = EXIT_VERIFY
    _emit(args, result, started)
    return code


def _parse_pattern(parser, text: str, ell: int | None = None) -> OrientationPattern:
    try:
        p = OrientationPattern.from_string(text)
    except ValueError as exc:
        parser.error(str(exc))
    if ell is not None and len(p) != ell:
        parser.error(f"pattern {text!r} has length {len(p)}, expected {ell}")
    return p


def cmd_hamilton(args, parser) -> int:
    started = time.perf_counter()
    g = _graph_from(args)
    pattern = _parse_pattern(parser, args.pattern or "+" * g.n, g.n)
    result = {"graph_hash": graph_hash(g), "n": g.n, "pattern": str(pattern), "method": args.method}
    code = EXIT_OK
    try:
        if args.method == "dp":
            emb = find_cycle_dp(g, pattern, cap=args.cap)
        else:
            emb = find_cycle_backtrack(g, pattern, budget=args.budget)
    except CapExceeded as exc:
        parser.error(str(exc))
    except BudgetExhausted as exc:
        result.update(status="budget-exhausted", expansions=exc.expansions)
        code = EXIT_BUDGET
    else:
        if emb is None:
            result["status"] = "not-found"
            code = EXIT_NOT_FOUND
        else:
            ok = bool(verify_embedding(g, emb))
            result.update(status="found", embedding=list(emb.vertices), verified=ok)
            if not ok:
                code = EXIT_VERIFY
    _emit(args, result, started)
    return code


def cmd_factor(args, parser) -> int:
    started = time.perf_counter()
    g = _graph_from(args)
    patterns = None
    if args.patterns:
        patterns = [_parse_pattern(parser, s, args.ell) for s in args.patterns.split(",")]
        if len(patterns) == 1:
            patterns = patterns[0]
    req = FactorRequest(
        ell=args.ell, patterns=patterns, mode=args.mode, seed=args.seed,
        max_attempts=args.max_attempts, budget=args.budget, dp_cap=args.cap,
        best_effort=args.best_effort, threads=args.threads,
    )
    result = {"graph_hash": graph_hash(g), "n": g.n, "seed": args.seed, "ell": args.ell}
    if args.ell >= 1:
        result["threshold_report"] = threshold_report(g, args.ell, args.eps)
    code = EXIT_OK
    try:
        cert = cycle_factor(g, req)
    except ValueError as exc:
        if isinstance(exc, DivisibilityError):
            result.update(status="divisibility", error=str(exc))
            code = EXIT_DIVISIBILITY
        else:
            parser.error(str(exc))
    except FactorError as exc:
        result.update(status=exc.stage, error=str(exc), part=exc.part)
        if exc.partition is not None:
            result["partial"] = {
                "blocks": [list(b) for b in exc.partition.blocks],
                "embeddings": [None if e is None else list(e.vertices) for e in exc.embeddings],
            }
        code = _FACTOR_EXITS[exc.stage]
    else:
        verdict = verify_factor(g, cert)
        result["status"] = "below-threshold" if cert.below_threshold else "ok"
        result["verified"] = verdict.ok
        result["certificate"] = certificate_to_dict(cert)
        if not verdict.ok:
            result["failures"] = verdict.failures
            code = EXIT_VERIFY
    _emit(args, result, started)
    return code


def cmd_experiment(args, parser) -> int:
    started = time.perf_counter()
    if args.kind == "tail":
        if args.samples < 1:
            parser.error("--samples must be at least 1")
        if args.grid:
            rows = tail_grid(samples=args.samples, seed=args.seed)
        else:
            if None in (args.N, args.n, args.m, args.t):
                parser.error("tail needs --N, --n, --m and --t (or --grid)")
            try:
                params = TailParams(args.N, args.n, args.m, args.t, args.samples, args.seed)
            except ValueError as exc:
                parser.error(str(exc))
            rows = [(params, tail_experiment(params))]
        result = {
            "kind": "tail",
            "points": [{"N": p.N, "n": p.n, "m": p.m, "t": p.t, "samples": p.samples,
                        "seed": p.seed, **r.to_dict()} for p, r in rows],
        }
        passed = all(r.passed for _, r in rows)
        if args.csv is not None:
            Path(args.csv).write_text(reports_to_csv(rows), encoding="utf-8")
    else:
        if args.n is None or args.n < 8 or args.n % 2:
            parser.error("split-success needs an even --n of at least 8")
        if args.trials < 1:
            parser.error("--trials must be at least 1")
        rep = split_success_experiment(args.n, args.trials, args.mode, args.seed, args.p)
        result = {"kind": "split-success", "n": args.n, **rep.to_dict()}
        passed = rep.passed
    result["pass"] = passed
    _emit(args, result, started)
    return EXIT_OK if passed else EXIT_EXPERIMENT


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="edge-list file")
    src.add_argument("--tournament", type=int, metavar="N", help="random tournament on N vertices")
    src.add_argument("--oriented", nargs=2, metavar=("N", "P"), help="random oriented graph G(N, P)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclefactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random graph as an edge list")
    p.add_argument("kind", choices=["tournament", "oriented"])
    p.add_argument("params", nargs="+", help="N, or N P for oriented")
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("degree", help="minimum semi- and total degree")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("partition", help="recursive degree-preserving equipartition")
    _add_input(p)
    _add_common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mode", type=_mode, default=DegreeMode.SEMI, choices=list(DegreeMode),
                   metavar="{semi,total}")
    p.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)
    p.add_argument("--best-effort", action="store_true")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("hamilton", help="spanning cycle with a given orientation")
    _add_input(p)
    _add_common(p)
    p.add_argument("--pattern", help="string over +/- of length n (default: directed)")
    p.add_argument("--method", choices=["dp", "backtrack"], default="dp")
    p.add_argument("--cap", type=int, default=DEFAULT_DP_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_hamilton)

    p = sub.add_parser("factor", help="cycle-factor via partition and per-part search")
    _add_input(p)
    _add_common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--patterns", help="one pattern, or m comma-separated patterns")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--mode", type=_mode, default=DegreeMode.SEMI, choices=list(DegreeMode),
                   metavar="{semi,total}")
    p.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)
    p.add_argument("--cap", type=int, default=DEFAULT_DP_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--best-effort", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("experiment", help="Monte Carlo validation")
    p.add_argument("kind", choices=["tail", "split-success"])
    _add_common(p)
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--grid", action="store_true", help="run the standard tail grid")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--mode", type=_mode, default=DegreeMode.SEMI, choices=list(DegreeMode),
                   metavar="{semi,total}")
    p.add_argument("--p", type=float, default=None, help="edge probability (default: tournament)")
    p.add_argument("--csv", type=Path, default=None)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except _InputError as exc:
        print(f"cyclefactor: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

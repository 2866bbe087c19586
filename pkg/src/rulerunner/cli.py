"""Command-line front end: compile, run, stream, gen and diff workflows.

Exit codes: 0 for a SUCCESS verdict (or a completed command), 1 for a
FAILURE verdict, 2 for usage/parse errors, 3 for internal errors or
differential mismatches.
"""

from __future__ import annotations

import argparse
import random
import sys

from .engine import Monitor, Verdict, explain, run_trace
from .ltl import Formula, NnfError, ParseError, format_formula, parse_formula, to_nnf
from .oracle import enumerate_formulas, oracle_eval, random_formula
from .rules import compile_formula, dump_rules, dump_rules_json
from .traces import (
    GenParams,
    Trace,
    TraceError,
    format_trace_file,
    format_trace_inline,
    gen_traces,
    parse_trace_inline,
    read_trace_file,
)

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _parse_nnf(text: str) -> Formula:
    return to_nnf(parse_formula(text))


def _load_trace(args) -> Trace:
    if args.trace is not None:
        return parse_trace_inline(args.trace)
    return read_trace_file(args.trace_file)


def cmd_compile(args) -> int:
    system = compile_formula(_parse_nnf(args.formula))
    print(dump_rules_json(system) if args.json else dump_rules(system))
    return EXIT_SUCCESS


def cmd_run(args) -> int:
    system = compile_formula(_parse_nnf(args.formula))
    trace = _load_trace(args)
    result = run_trace(system, trace)
    if args.explain:
        print(explain(result))
        print()
    print(f"{result.verdict} at cell {result.deciding_cell}")
    return EXIT_SUCCESS if result.verdict is Verdict.SUCCESS else EXIT_FAILURE


def _parse_stream_cell(line: str) -> frozenset[str]:
    stripped = line.strip()
    if not stripped or stripped == ".":
        return frozenset()
    return parse_trace_inline(stripped)[0]


def cmd_stream(args) -> int:
    """One cell per stdin line; `$end` announces that the trace is over
    (an online monitor cannot see the last cell coming, so the event
    source must say so).  EOF counts as `$end`."""
    system = compile_formula(_parse_nnf(args.formula))
    monitor = Monitor(system)
    cells: list[frozenset[str]] = []
    verdict = Verdict.UNDECIDED
    for line in sys.stdin:
        if line.strip() == "$end":
            break
        try:
            cell = _parse_stream_cell(line)
        except TraceError as exc:
            print(f"skipped malformed cell: {exc}", file=sys.stderr)
            continue
        cells.append(cell)
        outcome = monitor.step(cell, is_last=False)
        verdict = outcome.verdict
        print(verdict if verdict is not Verdict.UNDECIDED else "?", flush=True)
        if verdict is not Verdict.UNDECIDED:
            return EXIT_SUCCESS if verdict is Verdict.SUCCESS else EXIT_FAILURE
    # end of input: replay with the end-of-trace marker on the final cell
    final = Trace(tuple(cells) if cells else (frozenset(),))
    result = run_trace(system, final)
    print(result.verdict, flush=True)
    return EXIT_SUCCESS if result.verdict is Verdict.SUCCESS else EXIT_FAILURE


def cmd_gen(args) -> int:
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip())
    try:
        params = GenParams(atoms=atoms, length=args.length, density=args.density, seed=args.seed, count=args.count)
    except ValueError as exc:
        print(f"invalid generator parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    chunks = [format_trace_file(t) for t in gen_traces(params)]
    print("---\n".join(chunks), end="")
    return EXIT_SUCCESS


def _diff_traces(atoms: tuple[str, ...], count: int, max_length: int, seed: int) -> list[Trace]:
    rng = random.Random(seed)
    densities = (0.0, 0.3, 0.7, 1.0)
    out = []
    for i in range(count):
        length = rng.randint(1, max_length)
        p = densities[i % len(densities)]
        cells = tuple(frozenset(a for a in atoms if rng.random() < p) for _ in range(length))
        out.append(Trace(cells))
    return out


def run_differential(
    formulas: list[Formula],
    traces: list[Trace],
) -> tuple[int, list[tuple[Formula, Trace, Verdict, bool]]]:
    """Compare the engine verdict against the brute-force semantics on every
    (formula, trace) pair; returns (comparisons, mismatches)."""
    mismatches = []
    comparisons = 0
    for f in formulas:
        system = compile_formula(f)
        for u in traces:
            comparisons += 1
            got = run_trace(system, u).verdict
            want = oracle_eval(f, u, 0)
            if (got is Verdict.SUCCESS) != want:
                mismatches.append((f, u, got, want))
    return comparisons, mismatches


def _formula_space_size(max_depth: int, atoms: int) -> int:
    n = 1 + 2 * atoms  # true, atoms, negated atoms
    leaves = n
    for _ in range(max_depth):
        n = leaves + 4 * n + 3 * n * n
    return n


def cmd_diff(args) -> int:
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip())
    space = _formula_space_size(args.max_depth, len(atoms))
    if space > 200_000:
        # full enumeration is out of reach; fall back to seeded sampling
        if args.limit is None:
            print(
                f"error: {space} distinct formulae at depth {args.max_depth}; pass --limit to sample",
                file=sys.stderr,
            )
            return EXIT_USAGE
        rng = random.Random(args.seed)
        formulas = [random_formula(args.max_depth, list(atoms), rng) for _ in range(args.limit)]
    else:
        formulas = enumerate_formulas(args.max_depth, list(atoms))
        if args.limit is not None and args.limit < len(formulas):
            formulas = random.Random(args.seed).sample(formulas, args.limit)
    traces = _diff_traces(atoms, args.traces, args.max_length, args.seed)
    comparisons, mismatches = run_differential(formulas, traces)
    print(f"formulas: {len(formulas)}")
    print(f"traces per formula: {len(traces)}")
    print(f"comparisons: {comparisons}")
    print(f"mismatches: {len(mismatches)}")
    for f, u, got, want in mismatches[:5]:
        expected = "SUCCESS" if want else "FAILURE"
        print(f"MISMATCH {format_formula(f)} over {format_trace_inline(u)}: engine {got}, oracle {expected}")
    return EXIT_SUCCESS if not mismatches else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rulerunner", description="Rule-based LTL monitoring over finite traces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="print the rule system compiled from a formula")
    p.add_argument("formula")
    p.add_argument("--json", action="store_true", help="machine-readable listing")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="monitor a complete trace")
    p.add_argument("formula")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace", help="inline trace, e.g. '[c - a - b,d - b]'")
    src.add_argument("--trace-file", help="trace file, one cell per line")
    p.add_argument("--explain", action="store_true", help="print the per-cell evolution")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stream", help="monitor cells read from stdin; '$end' closes the trace")
    p.add_argument("formula")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("gen", help="generate seeded random traces")
    p.add_argument("--atoms", required=True, help="comma-separated alphabet")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("diff", help="differential check of the engine against brute-force semantics")
    p.add_argument("--max-depth", type=int, default=2)
    p.add_argument("--atoms", default="a,b")
    p.add_argument("--traces", type=int, default=50)
    p.add_argument("--max-length", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=None, help="sample at most this many formulas")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, NnfError, TraceError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 analysis error,
3 resource cap exceeded (state cap or timeout).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .argumentation import grounded_fixpoint, parse_graph
from .bench import BenchConfig, log_to_jsonl, rows_to_csv, sweep
from .dsl import SpecError, parse_spec, serialize_spec
from .execution import enumerate_executions, format_trace, reflect
from .fsm import BuildAborted, build_machine, export_dot, export_json
from .game import (
    EndFunction,
    NonTerminatingSearch,
    SearchAborted,
    Utility,
    bfs_tree,
    export_tree_dot,
    export_tree_json,
    minimax,
)

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load(path: str):
    text = _read(path)
    try:
        return parse_spec(text)
    except SpecError as exc:
        raise UsageError(f"{path}:{exc}") from None


def _machine(doc, max_states=None):
    return build_machine(doc.system.rules1, doc.system.rules2, doc.initial, max_states=max_states)


def cmd_check(args) -> int:
    doc = _load(args.spec)
    sys.stdout.write(serialize_spec(doc))
    return EXIT_OK


def cmd_build_fsm(args) -> int:
    fsm = _machine(_load(args.spec), args.max_states)
    if args.dot:
        _write(args.dot, export_dot(fsm))
    if args.json:
        _write(args.json, export_json(fsm))
    print(fsm.summary())
    return EXIT_OK


def cmd_analyze(args) -> int:
    fsm = _machine(_load(args.spec), args.max_states)
    tree = bfs_tree(fsm, args.end, max_nodes=args.max_nodes)
    valued = minimax(tree, Utility(args.utility))
    if args.tree_out:
        out = export_tree_dot(valued) if args.tree_out.endswith(".dot") else export_tree_json(valued)
        _write(args.tree_out, out)
    print(f"root={valued.root_value}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    doc = _load(args.spec)
    for e in enumerate_executions(doc.system, doc.initial, args.max_steps):
        flag = "finite" if e.finite else "truncated"
        print(f"{flag} {format_trace(reflect(e))}".rstrip())
    return EXIT_OK


def cmd_grounded(args) -> int:
    try:
        graph = parse_graph(_read(args.graph))
    except ValueError as exc:
        raise UsageError(f"{args.graph}:{exc}") from None
    print(" ".join(sorted(grounded_fixpoint(graph))))
    return EXIT_OK


def cmd_bench(args) -> int:
    base = BenchConfig(
        runs=args.runs,
        num_arguments=args.args,
        timeout=args.timeout,
        seed=args.seed,
        parallelism=args.jobs,
    )
    rows, log = sweep(base, args.max_attacks)
    csv_text = rows_to_csv(rows)
    if args.csv:
        _write(args.csv, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.log:
        _write(args.log, log_to_jsonl(log))
    return EXIT_OK


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _end(text: str) -> EndFunction:
    try:
        return EndFunction.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _densities(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("attack counts must be non-negative")
    return values


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dialectic", description="Compile and analyse two-agent dialogue systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="parse a system and print its canonical form")
    c.add_argument("spec")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("build-fsm", help="build the dialogue FSM")
    c.add_argument("spec")
    c.add_argument("--dot", metavar="PATH")
    c.add_argument("--json", metavar="PATH")
    c.add_argument("--max-states", type=_positive)
    c.set_defaults(func=cmd_build_fsm)

    c = sub.add_parser("analyze", help="minimax analysis of the FSM's search tree")
    c.add_argument("spec")
    c.add_argument("--end", type=_end, default=EndFunction.parse("exhaustive"),
                   help="exhaustive, norepeat or depth:N")
    c.add_argument("--utility", choices=[u.value for u in Utility], default="grounded")
    c.add_argument("--tree-out", metavar="PATH", help="write the valued tree (.dot or JSON)")
    c.add_argument("--max-states", type=_positive)
    c.add_argument("--max-nodes", type=_positive)
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("enumerate", help="list the reflected traces of all executions")
    c.add_argument("spec")
    c.add_argument("--max-steps", type=int, default=12)
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("grounded", help="grounded extension of an argument graph file")
    c.add_argument("graph")
    c.set_defaults(func=cmd_grounded)

    c = sub.add_parser("bench", help="run the random-instance benchmark")
    c.add_argument("--runs", type=_positive, default=100)
    c.add_argument("--args", type=int, default=20)
    c.add_argument("--max-attacks", type=_densities, default=[20],
                   help="attacks per agent; a comma-separated list gives one row each")
    c.add_argument("--timeout", type=float, default=100.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=_positive, default=1)
    c.add_argument("--csv", metavar="PATH")
    c.add_argument("--log", metavar="PATH", help="per-run JSON-lines log")
    c.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BuildAborted, SearchAborted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NonTerminatingSearch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except ValueError as exc:
        # invalid parameter combinations such as --max-steps 1 or a bad bench config
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""The mup command line: run a file, start the shell, or serve the protocol.

Exit codes for `mup run`: 0 with answers on success, 1 on failure, 2 for
errors of any kind including an exceeded depth limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .choices import ChoiceError, make_script_provider
from .executor import ex
from .prover import Outcome, SearchConfig, pv
from .repl import ConsoleProvider, run_repl
from .syntax import ParseError, format_bindings, parse_goal, parse_program
from .terms import FreshIds
from .unify import UnifyConfig


def run_file(path: str, query: str, mode: str = "pv",
             choices: Optional[Sequence[int]] = None,
             depth: Optional[int] = None, occurs_check: bool = True,
             trace: bool = False, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None,
             choice_input: Optional[TextIO] = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        source = Path(path).read_text()
    except OSError as e:
        err.write(f"mup: cannot read {path}: {e}\n")
        return 2
    fresh = FreshIds()
    try:
        program = parse_program(source, origin=path, fresh=fresh)
    except ParseError as e:
        err.write(f"{path}:{e.line}:{e.column}: {e.message}\n")
        return 2
    try:
        goal, _ = parse_goal(query, fresh)
    except ParseError as e:
        err.write(f"query:{e.line}:{e.column}: {e.message}\n")
        return 2
    cfg = SearchConfig(depth_limit=depth if depth is not None else 256,
                       unify=UnifyConfig(occurs_check=occurs_check))
    tracer = None
    if trace:
        tracer = lambda ev: err.write(f"trace: {json.dumps(ev.as_dict())}\n")
    if mode == "pv":
        if choices is not None:
            err.write("mup: --choices only applies to --mode ex\n")
            return 2
        result = pv(program, goal, cfg, fresh=fresh, tracer=tracer)
    elif mode == "ex":
        if choices is not None:
            provider = make_script_provider(choices)
        else:
            provider = ConsoleProvider(choice_input or sys.stdin, out)
        try:
            result = ex(program, goal, provider, cfg, fresh=fresh, tracer=tracer)
        except ChoiceError as e:
            err.write(f"mup: {e}\n")
            return 2
    else:
        err.write(f"mup: unknown mode {mode!r}\n")
        return 2
    if result.outcome is Outcome.FAILURE:
        out.write("no.\n")
        return 1
    if result.outcome is Outcome.DEPTH_EXCEEDED:
        out.write("depth limit exceeded.\n")
        return 2
    if not result.query_vars:
        out.write("yes.\n")
        return 0
    for answer in result.answers:
        pairs = format_bindings(answer, result.query_vars)
        out.write(", ".join(f"{n} = {t}" for n, t in pairs) + "\n")
    if result.depth_hit:
        err.write(f"mup: note: the search was truncated at depth "
                  f"{cfg.depth_limit}; deeper answers may exist\n")
    return 0


def _script_arg(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected comma-separated indices, e.g. 0,1,2")
    if not parts:
        raise argparse.ArgumentTypeError("the script cannot be empty")
    return parts


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer")
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mup",
        description="Logic programming with choice-disjunctive clauses.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one query against a program file")
    run_p.add_argument("file", help="program file (.mup)")
    run_p.add_argument("--query", "-q", required=True, help="the goal to solve")
    run_p.add_argument("--mode", choices=("pv", "ex"), default="pv",
                       help="pv proves the goal in every world; ex asks for "
                            "choices (default: pv)")
    run_p.add_argument("--choices", type=_script_arg, default=None,
                       metavar="I,J,...",
                       help="predetermined 0-based choice per choice item, "
                            "in program order (ex mode)")
    run_p.add_argument("--depth", type=_positive_int, default=None,
                       help="search depth limit (default 256)")
    run_p.add_argument("--no-occurs-check", action="store_true",
                       help="skip the occurs check during unification")
    run_p.add_argument("--trace", action="store_true",
                       help="print derivation events to stderr")

    repl_p = sub.add_parser("repl", help="interactive shell")
    repl_p.add_argument("--depth", type=_positive_int, default=None)

    serve_p = sub.add_parser("serve", help="speak the JSON protocol")
    serve_p.add_argument("--port", type=int, default=None,
                         help="serve WebSocket clients at ws://HOST:PORT/ws")
    serve_p.add_argument("--stdio", action="store_true",
                         help="speak newline-delimited JSON on stdin/stdout")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--static", default=None, metavar="DIR",
                         help="also serve this directory at / (a built web client)")
    serve_p.add_argument("--depth", type=_positive_int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return run_file(args.file, args.query, mode=args.mode,
                        choices=args.choices, depth=args.depth,
                        occurs_check=not args.no_occurs_check,
                        trace=args.trace)
    if args.command == "repl":
        cfg = SearchConfig(depth_limit=args.depth) if args.depth else None
        return run_repl(cfg=cfg)
    if args.command == "serve":
        from .service import serve
        cfg = SearchConfig(depth_limit=args.depth) if args.depth else None
        try:
            return serve(port=args.port, stdio=args.stdio, cfg=cfg,
                         host=args.host, static_dir=args.static)
        except ValueError as e:
            sys.stderr.write(f"mup: {e}\n")
            return 2
        except KeyboardInterrupt:
            return 0
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())

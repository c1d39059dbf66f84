"""Interactive shell: enter clauses, ask queries, step through answers.

Lines ending in "." are program items and are appended to the session's
program. "?- goal." runs a query; ";" asks for the next answer. Colon
commands control the session:

    :load FILE     replace the program with FILE's contents
    :list          show the current program
    :mode pv|ex    switch between batch proving and interactive execution
    :depth N       set the search depth limit
    :occurs on|off toggle the occurs check
    :trace on|off  print derivation events
    :help          this summary
    :quit          leave
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional, TextIO

from .choices import ChoiceError, ChoiceRequest
from .executor import ex
from .prover import Outcome, RunResult, SearchConfig, pv
from .syntax import ParseError, format_bindings, parse_goal, parse_program, pretty
from .terms import Bang, Choice, FreshIds, Program
from .trace import TraceEvent
from .unify import UnifyConfig

PROMPT = "mup> "


class ConsoleProvider:
    """Asks choices on the terminal. Indices are 0-based, matching the
    --choices flag and the wire protocol."""

    def __init__(self, inp: TextIO, out: TextIO):
        self._inp = inp
        self._out = out

    def choose(self, request: ChoiceRequest) -> int:
        n = len(request.alternatives)
        self._out.write(f"choice at {request.group_origin}:\n")
        for i, text in request.alternatives:
            self._out.write(f"  [{i}] {text}\n")
        while True:
            self._out.write(f"choice [0-{n - 1}]> ")
            self._out.flush()
            line = self._inp.readline()
            if not line:
                raise ChoiceError("input closed while a choice was pending")
            line = line.strip()
            try:
                index = int(line)
            except ValueError:
                self._out.write(f"please enter a number between 0 and {n - 1}\n")
                continue
            if 0 <= index < n:
                return index
            self._out.write(f"please enter a number between 0 and {n - 1}\n")


class _ReplState:
    def __init__(self, cfg: SearchConfig):
        self.fresh = FreshIds()
        self.items: list = []
        self.labels: list[str] = []
        self.origins: list[str] = []
        self.mode = "ex"
        self.depth = cfg.depth_limit
        self.occurs = cfg.unify.occurs_check
        self.trace = False
        self.result: Optional[RunResult] = None

    def program(self) -> Program:
        return Program(tuple(self.items), source_names=tuple(self.labels),
                       origin="<repl>", item_origins=tuple(self.origins))

    def cfg(self) -> SearchConfig:
        return SearchConfig(depth_limit=self.depth,
                            unify=UnifyConfig(occurs_check=self.occurs))


def run_repl(stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
             cfg: Optional[SearchConfig] = None) -> int:
    inp = stdin if stdin is not None else sys.stdin
    out = stdout if stdout is not None else sys.stdout
    state = _ReplState(cfg or SearchConfig())
    out.write("muProlog shell; :help for commands, :quit to leave.\n")
    while True:
        out.write(PROMPT)
        out.flush()
        line = inp.readline()
        if not line:
            out.write("\n")
            return 0
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith(":"):
            if not _command(state, line, out):
                return 0
            continue
        if line == ";":
            _next_answer(state, out)
            continue
        if line.startswith("?-"):
            _query(state, line[2:].strip(), inp, out)
            continue
        _add_items(state, line, out)


def _command(state: _ReplState, line: str, out: TextIO) -> bool:
    parts = line.split(None, 1)
    cmd = parts[0]
    arg = parts[1].strip() if len(parts) > 1 else ""
    if cmd == ":quit" or cmd == ":q":
        return False
    if cmd == ":help":
        out.write(__doc__.split("\n", 2)[2])
        return True
    if cmd == ":load":
        if not arg:
            out.write(":load needs a file name\n")
            return True
        try:
            text = Path(arg).read_text()
        except OSError as e:
            out.write(f"cannot read {arg}: {e}\n")
            return True
        try:
            program = parse_program(text, origin=arg, fresh=state.fresh)
        except ParseError as e:
            out.write(f"{arg}:{e.line}:{e.column}: {e.message}\n")
            return True
        state.items = list(program.clauses)
        state.labels = list(program.source_names or ())
        state.origins = [program.item_origin(i)
                         for i in range(len(program.clauses))]
        state.result = None
        out.write(f"loaded {len(state.items)} item(s) from {arg}\n")
        return True
    if cmd == ":list":
        if not state.items:
            out.write("(empty program)\n")
        for label in state.labels:
            out.write(label + ".\n")
        return True
    if cmd == ":mode":
        if arg in ("pv", "ex"):
            state.mode = arg
            out.write(f"mode is {arg}\n")
        else:
            out.write(":mode takes pv or ex\n")
        return True
    if cmd == ":depth":
        try:
            depth = int(arg)
        except ValueError:
            depth = 0
        if depth < 1:
            out.write(":depth takes a positive integer\n")
        else:
            state.depth = depth
            out.write(f"depth limit is {depth}\n")
        return True
    if cmd == ":occurs":
        if arg in ("on", "off"):
            state.occurs = arg == "on"
            out.write(f"occurs check is {arg}\n")
        else:
            out.write(":occurs takes on or off\n")
        return True
    if cmd == ":trace":
        if arg in ("on", "off"):
            state.trace = arg == "on"
            out.write(f"trace is {arg}\n")
        else:
            out.write(":trace takes on or off\n")
        return True
    out.write(f"unknown command {cmd}; :help lists commands\n")
    return True


def _add_items(state: _ReplState, line: str, out: TextIO) -> None:
    try:
        program = parse_program(line, origin="<repl>", fresh=state.fresh)
    except ParseError as e:
        out.write(f"line {e.line}, col {e.column}: {e.message}\n")
        return
    state.items.extend(program.clauses)
    state.labels.extend(program.source_names or ())
    state.origins.extend("<repl>" for _ in program.clauses)
    state.result = None
    n = len(program.clauses)
    out.write(f"added {n} item(s)\n")


def _query(state: _ReplState, text: str, inp: TextIO, out: TextIO) -> None:
    state.result = None
    try:
        goal, _ = parse_goal(text, state.fresh)
    except ParseError as e:
        out.write(f"line {e.line}, col {e.column}: {e.message}\n")
        return
    tracer = None
    if state.trace:
        tracer = lambda ev: out.write(f"trace: {ev.as_dict()}\n")
    try:
        if state.mode == "pv":
            result = pv(state.program(), goal, state.cfg(), fresh=state.fresh,
                        tracer=tracer)
        else:
            provider = ConsoleProvider(inp, out)
            result = ex(state.program(), goal, provider, state.cfg(),
                        fresh=state.fresh, tracer=tracer)
    except ChoiceError as e:
        out.write(f"{e}\n")
        return
    if result.outcome is Outcome.FAILURE:
        out.write("no.\n")
        return
    if result.outcome is Outcome.DEPTH_EXCEEDED:
        out.write("depth limit exceeded.\n")
        return
    state.result = result
    _next_answer(state, out)


def _next_answer(state: _ReplState, out: TextIO) -> None:
    if state.result is None:
        out.write("no query is active.\n")
        return
    answer = next(state.result.answers, None)
    if answer is None:
        if state.result.depth_hit:
            out.write("depth limit exceeded.\n")
        else:
            out.write("no.\n")
        state.result = None
        return
    pairs = format_bindings(answer, state.result.query_vars)
    if not pairs:
        out.write("yes.\n")
        state.result = None  # no variables: every further answer reads the same
        return
    out.write(", ".join(f"{n} = {t}" for n, t in pairs) + "\n")

"""One protocol session: newline-delimited JSON messages in, frames out.

Client messages: load {source, origin?}, query {goal, mode?, depth?,
occurs_check?, trace?}, choice {request_id, index}, next {}, stop {}.
Server frames: loaded, choice_request, answer, failure, depth_exceeded,
trace, error. See docs/protocol.md for the full schema.

State machine:

    idle --query--> running --(choice_request)--> awaiting_choice
    awaiting_choice --choice--> running
    running --(answer)--> done --next--> running
    running --(failure | depth_exceeded)--> idle
    running | awaiting_choice | done --stop--> idle

Derivations run on a worker thread; choices and next-tokens reach it through
queues owned by that derivation, so a stopped run can never consume messages
meant for a later one. `emit` may be called from the worker thread and must
not call back into the session.
"""

from __future__ import annotations

import itertools
import json
import queue
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

from .choices import ChoiceError, ChoiceRequest
from .executor import ex
from .prover import DerivationCancelled, Outcome, SearchConfig, pv
from .syntax import ParseError, format_bindings, parse_goal, parse_program
from .terms import FreshIds, Program
from .unify import UnifyConfig

_CANCEL = object()


def answer_text(pairs: list[tuple[str, str]]) -> str:
    if not pairs:
        return "yes"
    return ", ".join(f"{name} = {text}" for name, text in pairs)


@dataclass
class _Derivation:
    id: int
    cancel: threading.Event = field(default_factory=threading.Event)
    choices: "queue.Queue" = field(default_factory=queue.Queue)
    tokens: "queue.Queue" = field(default_factory=queue.Queue)
    pending: Optional[ChoiceRequest] = None


class _QueueProvider:
    """Bridges the engine's synchronous choose() to the message flow: emit a
    choice_request frame, then block until the transport delivers an index."""

    def __init__(self, session: "Session", derivation: _Derivation):
        self._session = session
        self._derivation = derivation

    def choose(self, request: ChoiceRequest) -> int:
        s, d = self._session, self._derivation
        if d.cancel.is_set():
            raise DerivationCancelled()
        with s._state_lock:
            d.pending = request
            s.state = "awaiting_choice"
            s._send({
                "type": "choice_request",
                "request_id": request.request_id,
                "alternatives": [text for _, text in request.alternatives],
                "origin": request.group_origin,
            })
        item = d.choices.get()
        if item is _CANCEL:
            raise DerivationCancelled()
        return item


class Session:
    def __init__(self, emit: Callable[[dict], None],
                 cfg: Optional[SearchConfig] = None):
        self._emit = emit
        self._emit_lock = threading.Lock()
        self._state_lock = threading.RLock()
        self._cfg = cfg or SearchConfig()
        self.state = "idle"
        self.program: Optional[Program] = None
        self.fresh = FreshIds()
        self._current: Optional[_Derivation] = None
        self._thread: Optional[threading.Thread] = None
        self._derivation_ids = itertools.count(1)
        self._closed = False

    # --- transport entry points -------------------------------------------

    def handle_line(self, line: str) -> None:
        line = line.strip()
        if not line:
            return
        try:
            msg = json.loads(line)
        except ValueError as e:
            self._send_error("bad_json", f"not valid JSON: {e}")
            return
        self.handle(msg)

    def handle(self, msg) -> None:
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            self._send_error("bad_message", "message must be an object with a string 'type'")
            return
        kind = msg["type"]
        if kind == "load":
            self._on_load(msg)
        elif kind == "query":
            self._on_query(msg)
        elif kind == "choice":
            self._on_choice(msg)
        elif kind == "next":
            self._on_next(msg)
        elif kind == "stop":
            self._on_stop(msg)
        else:
            self._send_error("bad_message", f"unknown message type {kind!r}")

    def close(self) -> None:
        """Disconnect: cancel any running derivation and stop emitting."""
        with self._state_lock:
            self._closed = True
            d = self._current
            if d is not None:
                d.cancel.set()
                d.choices.put(_CANCEL)
                d.tokens.put(_CANCEL)
            thread = self._thread
        if thread is not None and thread.is_alive():
            thread.join(timeout=5)

    def join_worker(self, timeout: float = 5) -> bool:
        """Wait for the worker thread; True once no derivation is running."""
        thread = self._thread
        if thread is not None and thread.is_alive():
            thread.join(timeout)
        thread = self._thread
        return thread is None or not thread.is_alive()

    # --- message handlers --------------------------------------------------

    def _on_load(self, msg: dict) -> None:
        with self._state_lock:
            if self.state != "idle":
                self._send_error("busy", "cannot load while a derivation is active")
                return
            text = msg.get("source")
            if not isinstance(text, str):
                self._send_error("bad_message", "load needs a string 'source'")
                return
            origin = msg.get("origin", "<client>")
            if not isinstance(origin, str):
                self._send_error("bad_message", "'origin' must be a string")
                return
            try:
                program = parse_program(text, origin=origin, fresh=self.fresh)
            except ParseError as e:
                self._send_error(
                    "parse_error",
                    f"line {e.line}, col {e.column}: {e.message}")
                return
            self.program = program
            self._send({
                "type": "loaded",
                "clause_count": len(program.clauses),
                "items": list(program.source_names or ()),
            })

    def _on_query(self, msg: dict) -> None:
        with self._state_lock:
            if self.state != "idle":
                self._send_error("busy", "a derivation is already active")
                return
            if self.program is None:
                self._send_error("no_program", "load a program first")
                return
            goal_text = msg.get("goal")
            if not isinstance(goal_text, str):
                self._send_error("bad_message", "query needs a string 'goal'")
                return
            mode = msg.get("mode", "ex")
            if mode not in ("pv", "ex"):
                self._send_error("bad_message", "'mode' must be 'pv' or 'ex'")
                return
            depth = msg.get("depth", None)
            if depth is not None and (isinstance(depth, bool)
                                      or not isinstance(depth, int) or depth < 1):
                self._send_error("bad_message", "'depth' must be a positive integer")
                return
            occurs = msg.get("occurs_check", True)
            trace_on = msg.get("trace", False)
            if not isinstance(occurs, bool) or not isinstance(trace_on, bool):
                self._send_error("bad_message",
                                 "'occurs_check' and 'trace' must be booleans")
                return
            try:
                goal, _ = parse_goal(goal_text, self.fresh)
            except ParseError as e:
                self._send_error(
                    "parse_error",
                    f"line {e.line}, col {e.column}: {e.message}")
                return
            cfg = SearchConfig(
                depth_limit=depth if depth is not None else self._cfg.depth_limit,
                unify=UnifyConfig(occurs_check=occurs))
            derivation = _Derivation(next(self._derivation_ids))
            self._current = derivation
            self.state = "running"
            thread = threading.Thread(
                target=self._worker_main,
                args=(derivation, self.program, goal, mode, cfg, trace_on),
                daemon=True, name=f"mup-derivation-{derivation.id}")
            self._thread = thread
            thread.start()

    def _on_choice(self, msg: dict) -> None:
        with self._state_lock:
            d = self._current
            if d is None or self.state != "awaiting_choice" or d.pending is None:
                self._send_error("stale_choice", "no choice is pending")
                return
            request_id = msg.get("request_id")
            if request_id != d.pending.request_id:
                self._send_error(
                    "stale_choice",
                    f"request {request_id!r} is not the pending request")
                return
            index = msg.get("index")
            if (isinstance(index, bool) or not isinstance(index, int)
                    or not 0 <= index < len(d.pending.alternatives)):
                self._send_error(
                    "bad_message",
                    f"'index' must be an integer in [0, {len(d.pending.alternatives)})")
                return
            d.pending = None
            self.state = "running"
            d.choices.put(index)

    def _on_next(self, msg: dict) -> None:
        with self._state_lock:
            if self.state == "done" and self._current is not None:
                self.state = "running"
                self._current.tokens.put(True)
            elif self.state == "idle":
                self._send_error("bad_message", "no active derivation")
            else:
                self._send_error("busy", "the derivation is not waiting for 'next'")

    def _on_stop(self, msg: dict) -> None:
        with self._state_lock:
            d = self._current
            if d is None:
                self._send_error("bad_message", "no derivation to stop")
                return
            d.cancel.set()
            d.choices.put(_CANCEL)
            d.tokens.put(_CANCEL)

    # --- worker side --------------------------------------------------------

    def _worker_main(self, d: _Derivation, program: Program, goal, mode: str,
                     cfg: SearchConfig, trace_on: bool) -> None:
        tracer = None
        if trace_on:
            tracer = lambda ev: self._send({"type": "trace", "event": ev.as_dict()})
        try:
            if mode == "pv":
                result = pv(program, goal, cfg, fresh=self.fresh, tracer=tracer,
                            cancel=d.cancel)
            else:
                provider = _QueueProvider(self, d)
                result = ex(program, goal, provider, cfg, fresh=self.fresh,
                            tracer=tracer, cancel=d.cancel)
            if result.outcome is Outcome.FAILURE:
                self._finish(d, {"type": "failure"})
                return
            if result.outcome is Outcome.DEPTH_EXCEEDED:
                self._finish(d, {"type": "depth_exceeded"})
                return
            answers = iter(result.answers)
            while True:
                try:
                    s = next(answers)
                except StopIteration:
                    # a truncated tail means deeper answers may exist
                    self._finish(d, {"type": "depth_exceeded"}
                                 if result.depth_hit else {"type": "failure"})
                    return
                pairs = format_bindings(s, result.query_vars)
                with self._state_lock:
                    self.state = "done"
                    self._send({
                        "type": "answer",
                        "bindings": dict(pairs),
                        "text": answer_text(pairs),
                    })
                token = d.tokens.get()
                if token is _CANCEL:
                    raise DerivationCancelled()
                with self._state_lock:
                    self.state = "running"
        except DerivationCancelled:
            self._finish(d, {"type": "trace", "event": {"kind": "stopped"}})
        except ChoiceError as e:
            self._finish(d, {"type": "error", "code": "choice_error",
                             "message": str(e)})
        except Exception as e:
            self._finish(d, {"type": "error", "code": "internal",
                             "message": f"{type(e).__name__}: {e}"})

    def _finish(self, d: _Derivation, frame: dict) -> None:
        with self._state_lock:
            if self._current is not d:
                return
            self.state = "idle"
            self._current = None
            self._send(frame)

    # --- output -------------------------------------------------------------

    def _send(self, frame: dict) -> None:
        if self._closed:
            return
        try:
            with self._emit_lock:
                self._emit(frame)
        except Exception:
            pass  # transport gone; the close() path will clean up

    def _send_error(self, code: str, message: str) -> None:
        self._send({"type": "error", "code": code, "message": message})

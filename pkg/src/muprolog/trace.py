"""Derivation trace events, emitted by the engines when a tracer is attached.

A tracer is any callable taking one event. Events are cheap frozen records
with a wire-friendly `as_dict`; `Trace` is the collect-into-a-list tracer used
by tests and the REPL.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional

if TYPE_CHECKING:
    from .choices import ChoiceRequest


@dataclass(frozen=True)
class TraceEvent:
    def as_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class EnterPhase1(TraceEvent):
    """A plain clause moved into the store during program decomposition."""

    clause: str

    def as_dict(self) -> dict:
        return {"kind": "enter_phase1", "clause": self.clause}


@dataclass(frozen=True)
class ChoiceRequested(TraceEvent):
    request: "ChoiceRequest"

    def as_dict(self) -> dict:
        return {
            "kind": "choice_requested",
            "request_id": self.request.request_id,
            "alternatives": [text for _, text in self.request.alternatives],
            "origin": self.request.group_origin,
        }


@dataclass(frozen=True)
class ChoiceTaken(TraceEvent):
    request_id: int
    index: int

    def as_dict(self) -> dict:
        return {"kind": "choice_taken", "request_id": self.request_id,
                "index": self.index}


@dataclass(frozen=True)
class VerifyUnchosen(TraceEvent):
    """Non-interactive check of an alternative that was not selected."""

    index: int
    outcome: str

    def as_dict(self) -> dict:
        return {"kind": "verify_unchosen", "index": self.index,
                "outcome": self.outcome}


@dataclass(frozen=True)
class EnterGoal(TraceEvent):
    goal: str
    depth: int

    def as_dict(self) -> dict:
        return {"kind": "enter_goal", "goal": self.goal, "depth": self.depth}


@dataclass(frozen=True)
class BackchainStep(TraceEvent):
    clause: str
    depth: int

    def as_dict(self) -> dict:
        return {"kind": "backchain", "clause": self.clause, "depth": self.depth}


@dataclass(frozen=True)
class AnswerFound(TraceEvent):
    bindings: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict:
        return {"kind": "answer", "bindings": dict(self.bindings)}


@dataclass(frozen=True)
class DerivationFailed(TraceEvent):
    def as_dict(self) -> dict:
        return {"kind": "failed"}


@dataclass(frozen=True)
class DepthLimitHit(TraceEvent):
    depth: int

    def as_dict(self) -> dict:
        return {"kind": "depth_limit_hit", "depth": self.depth}


Tracer = Callable[[TraceEvent], None]


class Trace:
    """Collecting tracer: `run(..., tracer=trace)` then inspect `trace.events`."""

    def __init__(self) -> None:
        self.events: list[TraceEvent] = []

    def __call__(self, event: TraceEvent) -> None:
        self.events.append(event)

    def kinds(self) -> list[str]:
        return [e.as_dict()["kind"] for e in self.events]

"""Choice requests and providers: how the interactive engine asks which
alternative of a choice item to keep."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol


@dataclass(frozen=True)
class ChoiceRequest:
    """One pending decision. `alternatives` pairs each selectable index with
    the display text of that clause; `group_origin` names the source position
    of the choice item."""

    request_id: int
    alternatives: tuple[tuple[int, str], ...]
    group_origin: str


class ChoiceProvider(Protocol):
    def choose(self, request: ChoiceRequest) -> int:
        """Return the index of the alternative to keep, in [0, len)."""
        ...


class ChoiceError(Exception):
    pass


class ScriptExhausted(ChoiceError):
    """The script ran out of decisions before the program ran out of choices."""


class ChoiceOutOfRange(ChoiceError):
    """A provider returned an index outside [0, number of alternatives)."""


@dataclass(frozen=True)
class ChoiceScript:
    """A predetermined decision per choice item, in program order."""

    decisions: tuple[int, ...]


class ScriptProvider:
    """Replays a script; raises ScriptExhausted past its end and
    ChoiceOutOfRange on an invalid index."""

    def __init__(self, script: ChoiceScript):
        self._decisions = script.decisions
        self._next = 0

    def choose(self, request: ChoiceRequest) -> int:
        if self._next >= len(self._decisions):
            raise ScriptExhausted(
                f"script has {len(self._decisions)} decisions but a "
                f"{len(request.alternatives)}-way choice at {request.group_origin} "
                f"needs one more")
        index = self._decisions[self._next]
        self._next += 1
        if not 0 <= index < len(request.alternatives):
            raise ChoiceOutOfRange(
                f"decision {index} out of range for the "
                f"{len(request.alternatives)}-way choice at {request.group_origin}")
        return index


def make_script_provider(script) -> ScriptProvider:
    """Accepts a ChoiceScript or a plain iterable of indices."""
    if not isinstance(script, ChoiceScript):
        script = ChoiceScript(tuple(script))
    return ScriptProvider(script)


class CountingProvider:
    """Wraps another provider (or none) and counts how often it is consulted.
    With no inner provider any consultation raises, which is how tests pin
    down that the batch prover never asks."""

    def __init__(self, inner: ChoiceProvider | None = None):
        self.calls = 0
        self._inner = inner

    def choose(self, request: ChoiceRequest) -> int:
        self.calls += 1
        if self._inner is None:
            raise AssertionError("provider consulted unexpectedly")
        return self._inner.choose(request)

"""Interactive execution: choices are delegated to a provider, then committed.

`ex` behaves exactly like the batch prover except at choice items: the
provider picks which alternative to keep (asked once per choice item, in
program order, before any goal solving), the run continues in that world, and
every discarded alternative is still checked in batch mode. A choice can make
the run fail; it is never backtracked.
"""

from __future__ import annotations

import threading
from typing import Optional

from .choices import (
    ChoiceError, ChoiceOutOfRange, ChoiceProvider, ChoiceRequest, ChoiceScript,
    CountingProvider, ScriptExhausted, ScriptProvider, make_script_provider,
)
from .prover import Engine, Outcome, RunResult, SearchConfig
from .terms import FreshIds, Goal, Program
from .trace import Tracer

__all__ = [
    "ex", "ChoiceError", "ChoiceOutOfRange", "ChoiceProvider", "ChoiceRequest",
    "ChoiceScript", "CountingProvider", "ScriptExhausted", "ScriptProvider",
    "make_script_provider",
]


def ex(program: Program, goal: Goal, provider: ChoiceProvider,
       cfg: Optional[SearchConfig] = None, fresh: Optional[FreshIds] = None,
       tracer: Optional[Tracer] = None,
       cancel: Optional[threading.Event] = None) -> RunResult:
    """Run the goal interactively; see the module docstring.

    In the world assembled from the provider's decisions, the candidate
    clause order equals the batch prover's order for that same world, so
    outcome and answers coincide with what pv would report there.
    """
    engine = Engine(cfg, fresh, tracer=tracer, provider=provider, cancel=cancel)
    return engine.run(program, goal, interactive=True)

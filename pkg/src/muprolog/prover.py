"""The derivation engine.

A run has two phases. Phase one walks the program's items in order, moving
plain clauses into the store; a choice item forks the run into one world per
alternative. The batch prover (`pv`) demands that every world succeed and
reports answers from the canonical world that keeps each item's first
alternative. The interactive executor (executor.ex) instead asks a provider
which alternative to keep, continues interactively in that world, and checks
the discarded alternatives in batch mode; a choice, once made, is never
revisited. Phase two reduces the goal against the fixed store: conjunctions
left to right, existentials by fresh instantiation, atoms by backchaining on
store clauses in order, solving rule bodies one level deeper.

Outcomes combine across conjuncts and worlds the same way everywhere: any
failure wins immediately; otherwise a depth-limit hit anywhere demotes the
combination to DEPTH_EXCEEDED; otherwise success. Within a single answer
stream, finding an answer counts as success even if other branches of the
search hit the limit.
"""

from __future__ import annotations

import enum
import itertools
import sys
import threading
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .choices import ChoiceOutOfRange, ChoiceProvider, ChoiceRequest
from .syntax import format_bindings, pretty
from .terms import (
    AtomGoal, Exists, FreshIds, Goal, HornClause, Program, Substitution,
    Tensor, Variable, flatten_choice, max_var_id, rename_apart,
)
from .trace import (
    AnswerFound, BackchainStep, ChoiceRequested, ChoiceTaken, DepthLimitHit,
    DerivationFailed, EnterGoal, EnterPhase1, Tracer, VerifyUnchosen,
)
from .unify import DEFAULT_UNIFY, UnifyConfig, mgu


class Outcome(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    DEPTH_EXCEEDED = "depth_exceeded"


@dataclass(frozen=True)
class SearchConfig:
    """depth_limit bounds backchaining nesting: solving a rule's body counts
    one level deeper than its head; facts add no depth."""

    depth_limit: int = 256
    unify: UnifyConfig = DEFAULT_UNIFY

    def __post_init__(self):
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be at least 1")


DEFAULT_SEARCH = SearchConfig()


class DerivationCancelled(Exception):
    """Raised out of a running derivation when its cancel event is set."""


class _DepthFlag:
    __slots__ = ("hit",)

    def __init__(self) -> None:
        self.hit = False


class AnswerStream:
    """Iterator of answer substitutions plus the depth-limit flag for the
    search that produces them. The flag is only final once the stream is
    exhausted."""

    def __init__(self, gen: Iterator[Substitution], flag: _DepthFlag):
        self._gen = gen
        self._flag = flag

    def __iter__(self) -> Iterator[Substitution]:
        return self._gen

    def __next__(self) -> Substitution:
        return next(self._gen)

    @property
    def hit_depth_limit(self) -> bool:
        return self._flag.hit


@dataclass
class RunResult:
    """Outcome of a full run. `answers` is lazy, restricted to the query
    variables, and non-empty only when outcome is SUCCESS (the first answer
    is already secured; pulling more may run more search)."""

    outcome: Outcome
    answers: Iterator[Substitution]
    query_vars: tuple[Variable, ...]
    _flag: Optional["_DepthFlag"] = None

    @property
    def depth_hit(self) -> bool:
        """Whether the answer search has hit the depth limit anywhere; on an
        exhausted success stream this distinguishes "no more answers" from
        "no more answers within the limit"."""
        return self._flag is not None and self._flag.hit

    def first(self) -> Optional[Substitution]:
        return next(self.answers, None)


def _peel_exists(goal: Goal) -> tuple[list[Variable], Goal]:
    out: list[Variable] = []
    while isinstance(goal, Exists):
        out.append(goal.var)
        goal = goal.body
    return out, goal


def _ensure_stack(depth_limit: int) -> None:
    # nested generators burn a few frames per backchain level
    needed = depth_limit * 8 + 1000
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)


class Engine:
    """Shared machinery for both run modes; see the module docstring.

    `provider` is consulted only on the interactive path, so a batch run
    never touches it no matter what the program contains.
    """

    def __init__(self, cfg: Optional[SearchConfig] = None,
                 fresh: Optional[FreshIds] = None,
                 tracer: Optional[Tracer] = None,
                 provider: Optional[ChoiceProvider] = None,
                 cancel: Optional[threading.Event] = None):
        self.cfg = cfg or DEFAULT_SEARCH
        self.fresh = fresh or FreshIds()
        self.tracer = tracer
        self.provider = provider
        self.cancel = cancel
        self._request_ids = itertools.count(1)

    def run(self, program: Program, goal: Goal, interactive: bool) -> RunResult:
        _ensure_stack(self.cfg.depth_limit)
        # inputs may carry ids from another FreshIds; renaming apart must
        # never reuse them
        self.fresh.advance_past(max_var_id(program, goal))
        top_vars, body = _peel_exists(goal)
        items = [(program.clauses[i], program.item_origin(i))
                 for i in range(len(program.clauses))]
        outcome, stream, flag = self._phase1((), items, 0, body, interactive,
                                             self.tracer)
        query_vars = tuple(v for v in top_vars if v.name != "_")
        if outcome is Outcome.SUCCESS:
            restrict = {v.id for v in top_vars}
            answers = self._restricted(stream, restrict, query_vars)
        else:
            answers = iter(())
        return RunResult(outcome, answers, query_vars, flag)

    # --- phase one: program decomposition ---------------------------------

    def _phase1(self, store: tuple[HornClause, ...], items, k: int, goal: Goal,
                interactive: bool, tracer: Optional[Tracer]):
        if k == len(items):
            return self._goal_phase(store, goal, tracer)
        d, origin = items[k]
        leaves = flatten_choice(d)
        if len(leaves) == 1:
            if tracer:
                tracer(EnterPhase1(pretty(leaves[0])))
            return self._phase1(store + (leaves[0],), items, k + 1, goal,
                                interactive, tracer)
        if interactive:
            return self._choice_point(store, items, k, leaves, origin, goal,
                                      tracer)
        # batch: every alternative's world must go through; answers come from
        # the world that keeps the first alternative
        saw_depth = False
        first = None
        for i, leaf in enumerate(leaves):
            sub_tracer = tracer if i == 0 else None
            if sub_tracer:
                sub_tracer(EnterPhase1(pretty(leaf)))
            result = self._phase1(store + (leaf,), items, k + 1, goal,
                                  interactive, sub_tracer)
            if result[0] is Outcome.FAILURE:
                return Outcome.FAILURE, None, None
            if result[0] is Outcome.DEPTH_EXCEEDED:
                saw_depth = True
            if i == 0:
                first = result
        if saw_depth:
            return Outcome.DEPTH_EXCEEDED, None, None
        return first

    def _choice_point(self, store, items, k: int, leaves, origin: str,
                      goal: Goal, tracer: Optional[Tracer]):
        if self.provider is None:
            raise ValueError("interactive run needs a choice provider")
        request = ChoiceRequest(
            next(self._request_ids),
            tuple((i, pretty(leaf)) for i, leaf in enumerate(leaves)),
            origin)
        if tracer:
            tracer(ChoiceRequested(request))
        index = self.provider.choose(request)
        if not 0 <= index < len(leaves):
            raise ChoiceOutOfRange(
                f"provider chose {index} for the {len(leaves)}-way choice "
                f"at {origin}")
        if tracer:
            tracer(ChoiceTaken(request.request_id, index))
        chosen = self._phase1(store + (leaves[index],), items, k + 1, goal,
                              True, tracer)
        if chosen[0] is Outcome.FAILURE:
            return Outcome.FAILURE, None, None
        saw_depth = chosen[0] is Outcome.DEPTH_EXCEEDED
        for j, leaf in enumerate(leaves):
            if j == index:
                continue
            verdict, _, _ = self._phase1(store + (leaf,), items, k + 1, goal,
                                         False, None)
            if tracer:
                tracer(VerifyUnchosen(j, verdict.value))
            if verdict is Outcome.FAILURE:
                return Outcome.FAILURE, None, None
            if verdict is Outcome.DEPTH_EXCEEDED:
                saw_depth = True
        if saw_depth:
            return Outcome.DEPTH_EXCEEDED, None, None
        return chosen

    # --- phase two: goal reduction ----------------------------------------

    def _goal_phase(self, store: tuple[HornClause, ...], goal: Goal,
                    tracer: Optional[Tracer]):
        flag = _DepthFlag()
        stream = self._solve(store, goal, Substitution.empty(), 0, flag, tracer)
        try:
            head = next(stream)
        except StopIteration:
            if flag.hit:
                return Outcome.DEPTH_EXCEEDED, None, flag
            if tracer:
                tracer(DerivationFailed())
            return Outcome.FAILURE, None, flag
        return Outcome.SUCCESS, itertools.chain((head,), stream), flag

    def _solve(self, store: tuple[HornClause, ...], goal: Goal,
               subst: Substitution, depth: int, flag: _DepthFlag,
               tracer: Optional[Tracer]) -> Iterator[Substitution]:
        if self.cancel is not None and self.cancel.is_set():
            raise DerivationCancelled()
        if isinstance(goal, AtomGoal):
            atom = subst.apply(goal.atom)
            if tracer:
                tracer(EnterGoal(pretty(atom), depth))
            for clause in store:
                renamed = rename_apart(clause, self.fresh)
                yield from self._backchain(renamed, store, atom, subst, depth,
                                           flag, tracer)
        elif isinstance(goal, Tensor):
            for left_answer in self._solve(store, goal.left, subst, depth,
                                           flag, tracer):
                yield from self._solve(store, goal.right, left_answer, depth,
                                       flag, tracer)
        elif isinstance(goal, Exists):
            witness = Variable(goal.var.name, self.fresh())
            inner = Substitution({goal.var.id: witness}).apply(goal.body)
            yield from self._solve(store, inner, subst, depth, flag, tracer)
        else:
            raise TypeError(f"cannot solve {type(goal).__name__}")

    def _backchain(self, renamed: HornClause, store, atom, subst: Substitution,
                   depth: int, flag: _DepthFlag,
                   tracer: Optional[Tracer]) -> Iterator[Substitution]:
        unifier = mgu(renamed.head, atom, self.cfg.unify)
        if unifier is None:
            return
        if tracer:
            tracer(BackchainStep(pretty(renamed), depth))
        answer = subst.compose(unifier)
        if renamed.body is None:
            yield answer
            return
        if depth + 1 > self.cfg.depth_limit:
            flag.hit = True
            if tracer:
                tracer(DepthLimitHit(depth + 1))
            return
        yield from self._solve(store, renamed.body, answer, depth + 1, flag,
                               tracer)

    def _restricted(self, stream, restrict: set[int],
                    query_vars: tuple[Variable, ...]) -> Iterator[Substitution]:
        for s in stream:
            answer = s.restrict(restrict)
            if self.tracer:
                self.tracer(AnswerFound(tuple(format_bindings(answer, query_vars))))
            yield answer


def pv(program: Program, goal: Goal, cfg: Optional[SearchConfig] = None,
       fresh: Optional[FreshIds] = None, tracer: Optional[Tracer] = None,
       cancel: Optional[threading.Event] = None) -> RunResult:
    """Batch prover: succeeds only if the goal holds in every world the
    program's choice items can denote; never consults any provider."""
    engine = Engine(cfg, fresh, tracer=tracer, provider=None, cancel=cancel)
    return engine.run(program, goal, interactive=False)


def solve_goal(store, goal: Goal, cfg: Optional[SearchConfig] = None,
               fresh: Optional[FreshIds] = None,
               subst: Optional[Substitution] = None, depth: int = 0,
               tracer: Optional[Tracer] = None) -> AnswerStream:
    """Goal reduction against a fixed clause store. Lazy; the stream's
    hit_depth_limit flag distinguishes exhaustion from a truncated search."""
    engine = Engine(cfg, fresh, tracer=tracer)
    _ensure_stack(engine.cfg.depth_limit)
    engine.fresh.advance_past(max_var_id(goal, *store))
    flag = _DepthFlag()
    gen = engine._solve(tuple(store), goal, subst or Substitution.empty(),
                        depth, flag, tracer)
    return AnswerStream(gen, flag)


def backchain(clause: HornClause, store, atom, cfg: Optional[SearchConfig] = None,
              fresh: Optional[FreshIds] = None,
              subst: Optional[Substitution] = None, depth: int = 0,
              tracer: Optional[Tracer] = None) -> AnswerStream:
    """Resolve one atom against one clause (already renamed apart from the
    atom), solving the clause body one level deeper on a head match."""
    engine = Engine(cfg, fresh, tracer=tracer)
    _ensure_stack(engine.cfg.depth_limit)
    engine.fresh.advance_past(max_var_id(clause, atom, *store))
    flag = _DepthFlag()
    gen = engine._backchain(clause, tuple(store), atom,
                            subst or Substitution.empty(), depth, flag, tracer)
    return AnswerStream(gen, flag)

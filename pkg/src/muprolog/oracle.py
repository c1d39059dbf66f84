"""Independent ground-truth machinery for cross-checking the engines.

A program with choice items denotes a finite set of worlds (one plain Horn
program per combination of alternatives). For function-free programs each
world's ground consequences can be computed bottom-up by fixpoint, giving a
slow but trustworthy answer to "does this goal hold here". Two checks build
on that:

- check_pv_oracle: the batch prover must succeed exactly when the goal holds
  in every world.
- check_choice_independence: under every complete decision script, the
  interactive executor must report the same outcome as the batch prover, and
  its answers must equal the batch answers for the world the script picks.

A seeded generator produces small function-free programs (stratified, so
every search terminates well inside the depth limit) to feed the checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .choices import make_script_provider
from .executor import ex
from .prover import Outcome, RunResult, SearchConfig, pv
from .syntax import parse_goal, parse_program, pretty
from .terms import (
    Atom, AtomGoal, Bang, Compound, Exists, FreshIds, Goal, HornClause,
    Program, Substitution, Tensor, Term, Variable, alpha_equal,
    flatten_choice,
)

WORLD_CAP = 4096
ANSWER_CAP = 64  # answers compared per script; prefix plus exhaustion parity


class WorldLimitExceeded(Exception):
    """The program denotes more worlds than the oracle is willing to try."""


class NotFunctionFree(Exception):
    """Bottom-up solving only covers programs without function symbols."""


@dataclass(frozen=True)
class Selection:
    """One alternative index per choice item, in program order."""

    picks: tuple[int, ...]


@dataclass(frozen=True)
class HornWorld:
    """A plain Horn program: one world of a choice-laden program."""

    clauses: tuple[HornClause, ...]


def choice_items(program: Program) -> list[tuple[int, list[HornClause]]]:
    """(item index, alternatives) for each item with two or more leaves."""
    out = []
    for i, d in enumerate(program.clauses):
        leaves = flatten_choice(d)
        if len(leaves) > 1:
            out.append((i, leaves))
    return out


def enumerate_selections(program: Program, cap: int = WORLD_CAP
                         ) -> list[tuple[Selection, HornWorld]]:
    """All worlds in lexicographic selection order (first item varies
    slowest). Raises WorldLimitExceeded past `cap` worlds."""
    groups = choice_items(program)
    total = 1
    for _, leaves in groups:
        total *= len(leaves)
        if total > cap:
            raise WorldLimitExceeded(f"{total}+ worlds exceeds cap {cap}")
    flat = [flatten_choice(d) for d in program.clauses]
    group_positions = [i for i, _ in groups]
    out = []
    for combo in itertools.product(*(range(len(leaves)) for _, leaves in groups)):
        picked = dict(zip(group_positions, combo))
        clauses = tuple(flat[i][picked.get(i, 0)] for i in range(len(flat)))
        out.append((Selection(tuple(combo)), HornWorld(clauses)))
    return out


def world_program(program: Program, selection: Selection) -> Program:
    """The single-world program a selection denotes, as a Program value."""
    groups = choice_items(program)
    if len(selection.picks) != len(groups):
        raise ValueError("selection length does not match the choice items")
    picked = {i: pick for (i, _), pick in zip(groups, selection.picks)}
    clauses = []
    for i, d in enumerate(program.clauses):
        leaves = flatten_choice(d)
        clauses.append(Bang(leaves[picked.get(i, 0)]))
    return Program(tuple(clauses), origin=f"{program.origin}@{selection.picks}")


def _check_function_free_term(t: Term) -> None:
    if isinstance(t, Compound) and t.args:
        raise NotFunctionFree(f"function symbol {t.functor}/{len(t.args)}")


def _check_function_free_atom(atom: Atom) -> None:
    for a in atom.args:
        _check_function_free_term(a)


def _goal_atoms(goal: Goal) -> tuple[list[Variable], list[Atom]]:
    """Existentially quantified variables (in order) and the flat atom list."""
    vars_out: list[Variable] = []
    atoms: list[Atom] = []

    def walk(g: Goal) -> None:
        if isinstance(g, AtomGoal):
            atoms.append(g.atom)
        elif isinstance(g, Tensor):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Exists):
            vars_out.append(g.var)
            walk(g.body)
        else:
            raise TypeError(f"cannot solve {type(g).__name__}")

    walk(goal)
    return vars_out, atoms


@dataclass
class BottomUpReport:
    holds: bool
    witnesses: tuple[dict[str, str], ...]
    facts: frozenset
    passes: int


def bottom_up_solve(world: HornWorld, goal: Goal) -> BottomUpReport:
    """Ground fixpoint truth of `goal` in a function-free Horn world.

    The Herbrand universe is the set of constants mentioned by the world and
    the goal (one synthetic constant if there are none). Raises
    NotFunctionFree when any function symbol appears.
    """
    constants: dict[str, Compound] = {}

    def scan_term(t: Term) -> None:
        if isinstance(t, Compound):
            _check_function_free_term(t)
            constants.setdefault(t.functor, t)

    for clause in world.clauses:
        for a in clause.head.args:
            scan_term(a)
        if clause.body is not None:
            _, atoms = _goal_atoms(clause.body)
            for atom in atoms:
                for a in atom.args:
                    scan_term(a)
    goal_vars, goal_atoms = _goal_atoms(goal)
    for atom in goal_atoms:
        for a in atom.args:
            scan_term(a)
    if not constants:
        constants["c0"] = Compound("c0", ())
    universe = tuple(constants.values())

    # instantiate every clause over the universe once, then saturate
    facts: set[Atom] = set()
    pending: list[tuple[Atom, tuple[Atom, ...]]] = []
    seen_rules: set[tuple] = set()
    for clause in world.clauses:
        body_atoms: list[Atom] = []
        extra_vars: tuple[Variable, ...] = ()
        if clause.body is not None:
            extra, body_atoms = _goal_atoms(clause.body)
            extra_vars = tuple(extra)  # existentials in a body are enumerable too
        ground_vars = clause.vars + extra_vars
        for combo in itertools.product(universe, repeat=len(ground_vars)):
            ground = Substitution({v.id: c for v, c in zip(ground_vars, combo)})
            head = ground.apply(clause.head)
            body = tuple(ground.apply(b) for b in body_atoms)
            key = (head, body)
            if key in seen_rules:
                continue
            seen_rules.add(key)
            if body:
                pending.append((head, body))
            else:
                facts.add(head)

    passes = 0
    changed = True
    while changed and pending:
        passes += 1
        changed = False
        rest = []
        for head, body in pending:
            if head in facts:
                continue
            if all(b in facts for b in body):
                facts.add(head)
                changed = True
            else:
                rest.append((head, body))
        pending = rest

    witnesses: list[dict[str, str]] = []
    holds = False
    for combo in itertools.product(universe, repeat=len(goal_vars)):
        ground = Substitution({v.id: c for v, c in zip(goal_vars, combo)})
        if all(ground.apply(atom) in facts for atom in goal_atoms):
            holds = True
            if len(witnesses) < 100:
                witnesses.append({v.name: c.functor
                                  for v, c in zip(goal_vars, combo)
                                  if v.name != "_"})
    return BottomUpReport(holds, tuple(witnesses), frozenset(facts), passes)


@dataclass
class PvOracleReport:
    worlds: int
    true_worlds: int
    expected_success: bool
    pv_outcome: Outcome
    conclusive: bool
    agrees: bool


def check_pv_oracle(program: Program, goal: Goal,
                    cfg: Optional[SearchConfig] = None) -> PvOracleReport:
    """Compare the batch prover against all-worlds bottom-up truth.

    Inconclusive (conclusive=False, agrees vacuously True) only when the
    prover hits its depth limit, since the fixpoint always terminates.
    """
    worlds = enumerate_selections(program)
    true_worlds = sum(1 for _, w in worlds if bottom_up_solve(w, goal).holds)
    expected = true_worlds == len(worlds)
    outcome = pv(program, goal, cfg).outcome
    if outcome is Outcome.DEPTH_EXCEEDED:
        return PvOracleReport(len(worlds), true_worlds, expected, outcome,
                              conclusive=False, agrees=True)
    agrees = (outcome is Outcome.SUCCESS) == expected
    return PvOracleReport(len(worlds), true_worlds, expected, outcome,
                          conclusive=True, agrees=agrees)


def _packed_answers(result: RunResult, cap: int = ANSWER_CAP
                    ) -> tuple[list[Compound], bool]:
    """First `cap` answers packed into comparable terms, plus whether the
    stream was exhausted within the cap."""
    out = []
    taken = 0
    for s in result.answers:
        args = []
        for v in result.query_vars:
            bound = s.get(v.id)
            args.append(bound if bound is not None else v)
        out.append(Compound("answer", tuple(args)))
        taken += 1
        if taken >= cap:
            return out, False
    return out, True


@dataclass
class ScriptReport:
    script: tuple[int, ...]
    ex_outcome: Outcome
    pv_world_outcome: Outcome
    outcome_agrees: bool
    answers_agree: bool


@dataclass
class ChoiceIndependenceReport:
    pv_outcome: Outcome
    scripts: int
    agrees: bool
    disagreements: tuple[ScriptReport, ...]


def check_choice_independence(program: Program, goal: Goal,
                              cfg: Optional[SearchConfig] = None
                              ) -> ChoiceIndependenceReport:
    """Run the executor under every complete script and require (a) its
    outcome to match the batch prover's outcome on the whole program,
    depth-limit classification included, and (b) on success, its answers to
    match the batch answers for the world the script selects."""
    groups = choice_items(program)
    total = 1
    for _, leaves in groups:
        total *= len(leaves)
        if total > WORLD_CAP:
            raise WorldLimitExceeded(f"{total}+ scripts exceeds cap {WORLD_CAP}")
    overall = pv(program, goal, cfg).outcome
    reports: list[ScriptReport] = []
    for combo in itertools.product(*(range(len(leaves)) for _, leaves in groups)):
        script = tuple(combo)
        ex_result = ex(program, goal, make_script_provider(script), cfg)
        outcome_ok = ex_result.outcome is overall
        answers_ok = True
        world_outcome = overall
        if ex_result.outcome is Outcome.SUCCESS or overall is Outcome.SUCCESS:
            world_result = pv(world_program(program, Selection(script)), goal, cfg)
            world_outcome = world_result.outcome
            ex_answers, ex_done = _packed_answers(ex_result)
            pv_answers, pv_done = _packed_answers(world_result)
            answers_ok = (ex_done == pv_done
                          and len(ex_answers) == len(pv_answers)
                          and all(alpha_equal(a, b)
                                  for a, b in zip(ex_answers, pv_answers)))
        report = ScriptReport(script, ex_result.outcome, world_outcome,
                              outcome_ok, answers_ok)
        if not (outcome_ok and answers_ok):
            reports.append(report)
    scripts = total if groups else 1
    return ChoiceIndependenceReport(overall, scripts, not reports,
                                    tuple(reports))


# --- random corpus ---------------------------------------------------------

_PRED_NAMES = ("p", "q", "r", "s")
_CONST_NAMES = ("a", "b", "c", "d")
_VAR_NAMES = ("X", "Y")


def random_case(rng: random.Random) -> tuple[str, str]:
    """A small function-free program and a goal over it, as source text.

    Body predicates always rank strictly below their head's predicate, so
    every generated program terminates under any search depth the tests use.
    Sizes stay within: at most 6 items, 3 choice items of 2 or 3 alternatives,
    arity at most 2, at most 4 constants, bodies of at most 2 atoms.
    """
    n_preds = rng.randint(2, 4)
    preds = list(_PRED_NAMES[:n_preds])
    rng.shuffle(preds)
    rank = {name: i for i, name in enumerate(preds)}
    arity = {name: rng.randint(0, 2) for name in preds}
    constants = list(_CONST_NAMES[:rng.randint(2, 3)])

    def leaf_text() -> str:
        head_pred = rng.choice(preds)
        var_pool: list[str] = []

        def fresh_or_reuse_var() -> str:
            if var_pool and rng.random() < 0.5:
                return rng.choice(var_pool)
            if len(var_pool) < len(_VAR_NAMES):
                name = _VAR_NAMES[len(var_pool)]
                var_pool.append(name)
                return name
            return rng.choice(var_pool)

        def term() -> str:
            if rng.random() < 0.55:
                return rng.choice(constants)
            return fresh_or_reuse_var()

        def atom(pred: str) -> str:
            n = arity[pred]
            if n == 0:
                return pred
            return f"{pred}({', '.join(term() for _ in range(n))})"

        head = atom(head_pred)
        below = [q for q in preds if rank[q] < rank[head_pred]]
        n_body = rng.randint(0, 2) if below else 0
        if n_body == 0:
            return head
        body = ", ".join(atom(rng.choice(below)) for _ in range(n_body))
        return f"{head} :- {body}"

    n_items = rng.randint(1, 6)
    n_groups = rng.randint(0, min(3, n_items))
    group_slots = set(rng.sample(range(n_items), n_groups))
    items = []
    for i in range(n_items):
        if i in group_slots:
            width = rng.randint(2, 3)
            items.append(" (+) ".join(leaf_text() for _ in range(width)) + ".")
        else:
            items.append(leaf_text() + ".")
    program_text = "\n".join(items)

    def goal_atom() -> str:
        pred = rng.choice(preds)
        n = arity[pred]
        if n == 0:
            return pred
        args = []
        for _ in range(n):
            if rng.random() < 0.5:
                args.append(rng.choice(constants))
            else:
                args.append(rng.choice(_VAR_NAMES))
        return f"{pred}({', '.join(args)})"

    goal_text = ", ".join(goal_atom() for _ in range(rng.randint(1, 2)))
    return program_text, goal_text


def random_corpus(seed: int, count: int) -> Iterator[tuple[Program, Goal]]:
    """Parsed (program, goal) cases from `random_case`, deterministically."""
    rng = random.Random(seed)
    for _ in range(count):
        program_text, goal_text = random_case(rng)
        # one id source per case: program vars and goal vars must not collide
        fresh = FreshIds()
        program = parse_program(program_text, origin="<generated>",
                                fresh=fresh)
        goal, _ = parse_goal(goal_text, fresh)
        yield program, goal

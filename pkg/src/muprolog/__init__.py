"""muProlog: Horn-clause logic programming with choice-disjunctive clauses.

A program item is either a reusable clause or a choice between clauses
("med (+) eng (+) eco."). The batch prover (`pv`) succeeds only when the goal
holds however the choices fall; the interactive executor (`ex`) asks a
provider to commit each choice and verifies the roads not taken.
"""

from .choices import (
    ChoiceError, ChoiceOutOfRange, ChoiceProvider, ChoiceRequest, ChoiceScript,
    CountingProvider, ScriptExhausted, ScriptProvider, make_script_provider,
)
from .executor import ex
from .oracle import (
    BottomUpReport, ChoiceIndependenceReport, HornWorld, NotFunctionFree,
    PvOracleReport, Selection, WorldLimitExceeded, bottom_up_solve,
    check_choice_independence, check_pv_oracle, enumerate_selections,
    random_case, random_corpus, world_program,
)
from .prover import (
    AnswerStream, DerivationCancelled, Engine, Outcome, RunResult,
    SearchConfig, backchain, pv, solve_goal,
)
from .session import Session
from .syntax import (
    ParseError, SourceProgram, format_bindings, parse_goal, parse_program,
    pretty,
)
from .terms import (
    Atom, AtomGoal, Bang, Choice, Compound, Exists, FreshIds, Goal,
    HornClause, Program, Substitution, Tensor, Term, Variable, alpha_equal,
    constant, flatten_choice, free_vars, max_var_id, rename_apart,
)
from .trace import Trace, TraceEvent
from .unify import UnifyConfig, mgu

__version__ = "0.1.0"

__all__ = [
    "Atom", "AtomGoal", "AnswerStream", "Bang", "BottomUpReport", "Choice",
    "ChoiceError", "ChoiceIndependenceReport", "ChoiceOutOfRange",
    "ChoiceProvider", "ChoiceRequest", "ChoiceScript", "Compound",
    "CountingProvider", "DerivationCancelled", "Engine", "Exists", "FreshIds",
    "Goal", "HornClause", "HornWorld", "NotFunctionFree", "Outcome",
    "ParseError", "Program", "PvOracleReport", "RunResult", "ScriptExhausted",
    "ScriptProvider", "SearchConfig", "Selection", "Session", "SourceProgram",
    "Substitution", "Tensor", "Term", "Trace", "TraceEvent", "UnifyConfig",
    "Variable", "WorldLimitExceeded", "alpha_equal", "backchain",
    "bottom_up_solve", "check_choice_independence", "check_pv_oracle",
    "constant", "enumerate_selections", "ex", "flatten_choice",
    "format_bindings", "free_vars", "make_script_provider", "max_var_id",
    "mgu",
    "parse_goal", "parse_program", "pretty", "pv", "random_case",
    "random_corpus", "rename_apart", "solve_goal", "world_program",
]

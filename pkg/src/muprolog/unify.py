"""Syntactic first-order unification producing most general unifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .terms import Atom, Compound, Substitution, Term, Variable


@dataclass(frozen=True)
class UnifyConfig:
    """occurs_check=True rejects bindings like X = f(X). Turning it off skips
    the test (standard Prolog behaviour); the result may then be cyclic and is
    not guaranteed idempotent."""

    occurs_check: bool = True


DEFAULT_UNIFY = UnifyConfig()


def _occurs(var_id: int, t: Term) -> bool:
    if isinstance(t, Variable):
        return t.id == var_id
    return any(_occurs(var_id, a) for a in t.args)


def _subst_one(t: Term, var_id: int, repl: Term) -> Term:
    if isinstance(t, Variable):
        return repl if t.id == var_id else t
    if not t.args:
        return t
    return Compound(t.functor, tuple(_subst_one(a, var_id, repl) for a in t.args))


def mgu(a: Union[Term, Atom], b: Union[Term, Atom],
        cfg: UnifyConfig = DEFAULT_UNIFY) -> Optional[Substitution]:
    """Most general unifier of two terms or two atoms, or None.

    Solved bindings are applied eagerly to the remaining equations and to
    earlier bindings, so the result is idempotent (occurs check on). The
    result binds only variables occurring in the inputs.
    """
    if isinstance(a, Atom) or isinstance(b, Atom):
        if not (isinstance(a, Atom) and isinstance(b, Atom)):
            raise TypeError("cannot unify an atom with a term")
        if a.predicate != b.predicate or len(a.args) != len(b.args):
            return None
        eqs = list(zip(a.args, b.args))
    else:
        eqs = [(a, b)]

    out: dict[int, Term] = {}
    while eqs:
        left, right = eqs.pop()
        if isinstance(left, Variable) and isinstance(right, Variable) and left.id == right.id:
            continue
        if isinstance(left, Variable) or isinstance(right, Variable):
            if not isinstance(left, Variable):
                left, right = right, left
            if cfg.occurs_check and _occurs(left.id, right):
                return None
            # keep idempotence: fold the new binding into every recorded image
            out = {vid: _subst_one(t, left.id, right) for vid, t in out.items()}
            eqs = [(_subst_one(p, left.id, right), _subst_one(q, left.id, right))
                   for p, q in eqs]
            out[left.id] = right
            continue
        if left.functor != right.functor or len(left.args) != len(right.args):
            return None
        eqs.extend(zip(left.args, right.args))
    return Substitution(out)

"""Core data model: terms, goals, clauses, programs, and substitutions.

Terms are first-order and immutable. Variables are identified by a numeric id
(display names are kept only for rendering), so renaming a clause apart is just
minting new ids. Substitutions are idempotent maps from variable id to term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union


class FreshIds:
    """Monotonic source of variable ids. Engines and parsers share one per
    session so renamed-apart clauses can never collide with goal variables."""

    def __init__(self, start: int = 0):
        self._next = start

    def __call__(self) -> int:
        n = self._next
        self._next += 1
        return n

    def advance_past(self, floor: int) -> None:
        """Never emit an id <= floor again; guards against inputs whose
        variables were minted by some other FreshIds."""
        if self._next <= floor:
            self._next = floor + 1


@dataclass(frozen=True, eq=False)
class Variable:
    """A logic variable. Identity is the id alone; `name` is display-only."""

    name: str
    id: int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Variable) and self.id == other.id

    def __hash__(self) -> int:
        return hash(self.id)

    def __repr__(self) -> str:
        return f"{self.name}#{self.id}"


@dataclass(frozen=True)
class Compound:
    """A function application f(t1, ..., tn); a constant is the n=0 case."""

    functor: str
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({', '.join(map(repr, self.args))})"


Term = Union[Variable, Compound]


def constant(name: str) -> Compound:
    return Compound(name, ())


@dataclass(frozen=True)
class Atom:
    """A predicate applied to terms: p(t1, ..., tn)."""

    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def indicator(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def __repr__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class AtomGoal:
    atom: Atom

    def __repr__(self) -> str:
        return repr(self.atom)


@dataclass(frozen=True)
class Tensor:
    """Conjunctive goal: solve left, then right under left's answers."""

    left: "Goal"
    right: "Goal"

    def __repr__(self) -> str:
        return f"({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Exists:
    """Existential goal: var is bound in body."""

    var: Variable
    body: "Goal"

    def __repr__(self) -> str:
        return f"exists {self.var!r} ({self.body!r})"


Goal = Union[AtomGoal, Tensor, Exists]


@dataclass(frozen=True)
class HornClause:
    """head :- body, with body None for facts. `vars` lists the clause's
    universally quantified variables in first-occurrence order."""

    head: Atom
    body: Optional[Goal] = None
    vars: tuple[Variable, ...] = ()

    def __repr__(self) -> str:
        if self.body is None:
            return repr(self.head)
        return f"{self.head!r} :- {self.body!r}"


@dataclass(frozen=True)
class Bang:
    """A reusable program clause (may be backchained on any number of times)."""

    clause: HornClause

    def __repr__(self) -> str:
        return f"!{self.clause!r}"


@dataclass(frozen=True)
class Choice:
    """A choice between two clause alternatives; exactly one side is kept."""

    left: "DFormula"
    right: "DFormula"

    def __repr__(self) -> str:
        return f"({self.left!r} (+) {self.right!r})"


DFormula = Union[Bang, Choice]


def flatten_choice(d: DFormula) -> list[HornClause]:
    """In-order leaf clauses of a (possibly nested) choice tree.

    A plain Bang yields a single leaf; choice items yield two or more. Leaf
    order is the source order, which fixes both the canonical (first-leaf)
    world and the numbering presented to choice providers.
    """
    if isinstance(d, Bang):
        return [d.clause]
    return flatten_choice(d.left) + flatten_choice(d.right)


@dataclass(frozen=True)
class Program:
    """An ordered list of clause items. Order is semantic: it fixes candidate
    clause order during search and the order choice points are presented in.

    `source_names` optionally carries a display label per item and `lines` the
    1-based source line per item; `origin` names where the text came from.
    """

    clauses: tuple[DFormula, ...]
    source_names: Optional[tuple[str, ...]] = None
    origin: str = "<unknown>"
    lines: Optional[tuple[int, ...]] = None
    item_origins: Optional[tuple[str, ...]] = None

    def item_label(self, index: int) -> str:
        if self.source_names is not None:
            return self.source_names[index]
        return repr(self.clauses[index])

    def item_origin(self, index: int) -> str:
        if self.item_origins is not None:
            return self.item_origins[index]
        if self.lines is not None:
            return f"{self.origin}:{self.lines[index]}"
        return f"{self.origin}:item{index}"


class Substitution:
    """An idempotent mapping from variable id to term.

    Idempotent means no term in the image mentions a variable in the domain,
    so applying is a single structural pass. Instances are treated as
    immutable; the raw constructor trusts its argument (engine internals
    maintain idempotence), while `of` normalizes arbitrary acyclic input.
    """

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[int, Term]] = None):
        self._bindings: dict[int, Term] = dict(bindings) if bindings else {}

    @classmethod
    def empty(cls) -> "Substitution":
        return cls()

    @classmethod
    def of(cls, bindings: Mapping[Variable, Term]) -> "Substitution":
        """Normalize {var: term} into idempotent form, e.g. {X: g(Y), Y: b}
        becomes {X: g(b), Y: b}. Raises ValueError on cyclic input."""
        raw = {v.id: t for v, t in bindings.items()
               if not (isinstance(t, Variable) and t.id == v.id)}
        current = cls(raw)
        for _ in range(len(raw) + 1):
            rewritten = {vid: current.apply(t) for vid, t in raw.items()}
            nxt = cls(rewritten)
            if nxt == current:
                return nxt
            raw = rewritten
            current = nxt
        raise ValueError("substitution bindings contain a cycle")

    @property
    def bindings(self) -> Mapping[int, Term]:
        return dict(self._bindings)

    def get(self, var_id: int) -> Optional[Term]:
        return self._bindings.get(var_id)

    def __len__(self) -> int:
        return len(self._bindings)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and self._bindings == other._bindings

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"#{vid} -> {t!r}" for vid, t in sorted(self._bindings.items()))
        return f"{{{inner}}}"

    def apply(self, x):
        """Apply to a Term, Atom, Goal, or HornClause, returning the same kind.

        Exists shadows its bound variable. For HornClause (used for renaming),
        `vars` entries bound to variables are renamed and entries bound to
        non-variables are dropped from the quantifier list.
        """
        if isinstance(x, Variable):
            return self._bindings.get(x.id, x)
        if isinstance(x, Compound):
            if not x.args:
                return x
            return Compound(x.functor, tuple(self.apply(a) for a in x.args))
        if isinstance(x, Atom):
            if not x.args:
                return x
            return Atom(x.predicate, tuple(self.apply(a) for a in x.args))
        if isinstance(x, AtomGoal):
            return AtomGoal(self.apply(x.atom))
        if isinstance(x, Tensor):
            return Tensor(self.apply(x.left), self.apply(x.right))
        if isinstance(x, Exists):
            if x.var.id in self._bindings:
                trimmed = dict(self._bindings)
                del trimmed[x.var.id]
                return Exists(x.var, Substitution(trimmed).apply(x.body))
            return Exists(x.var, self.apply(x.body))
        if isinstance(x, HornClause):
            new_vars = []
            for v in x.vars:
                image = self._bindings.get(v.id, v)
                if isinstance(image, Variable):
                    new_vars.append(image)
            body = self.apply(x.body) if x.body is not None else None
            return HornClause(self.apply(x.head), body, tuple(new_vars))
        raise TypeError(f"cannot apply substitution to {type(x).__name__}")

    def compose(self, other: "Substitution") -> "Substitution":
        """self then other: apply(compose(s1, s2), t) == apply(s2, apply(s1, t)).

        Keeps idempotence whenever other's domain is disjoint from self's
        domain and other's image avoids self's domain (always true for
        engine-produced chains, where each mgu binds only freshly renamed
        variables and is already composed with the current answer).
        """
        out: dict[int, Term] = {}
        for vid, t in self._bindings.items():
            image = other.apply(t)
            if not (isinstance(image, Variable) and image.id == vid):
                out[vid] = image
        for vid, t in other._bindings.items():
            if vid not in self._bindings:
                out[vid] = t
        return Substitution(out)

    def restrict(self, var_ids) -> "Substitution":
        keep = set(var_ids)
        return Substitution({vid: t for vid, t in self._bindings.items() if vid in keep})


def rename_apart(clause: HornClause, fresh: FreshIds) -> HornClause:
    """Copy of `clause` whose variables carry brand-new ids (same names)."""
    if not clause.vars:
        return clause
    mapping = {v.id: Variable(v.name, fresh()) for v in clause.vars}
    return Substitution(mapping).apply(clause)


def iter_vars(x, bound: frozenset[int] = frozenset()) -> Iterator[Variable]:
    """Free variables of any node, left to right, with repeats."""
    if isinstance(x, Variable):
        if x.id not in bound:
            yield x
    elif isinstance(x, (Compound, Atom)):
        for a in x.args:
            yield from iter_vars(a, bound)
    elif isinstance(x, AtomGoal):
        yield from iter_vars(x.atom, bound)
    elif isinstance(x, Tensor):
        yield from iter_vars(x.left, bound)
        yield from iter_vars(x.right, bound)
    elif isinstance(x, Exists):
        yield from iter_vars(x.body, bound | {x.var.id})
    elif isinstance(x, HornClause):
        inner = bound | {v.id for v in x.vars}
        yield from iter_vars(x.head, inner)
        if x.body is not None:
            yield from iter_vars(x.body, inner)
    elif isinstance(x, Bang):
        yield from iter_vars(x.clause, bound)
    elif isinstance(x, Choice):
        yield from iter_vars(x.left, bound)
        yield from iter_vars(x.right, bound)
    else:
        raise TypeError(f"cannot walk {type(x).__name__}")


def free_vars(x) -> list[Variable]:
    """Distinct free variables in first-occurrence order."""
    seen: set[int] = set()
    out: list[Variable] = []
    for v in iter_vars(x):
        if v.id not in seen:
            seen.add(v.id)
            out.append(v)
    return out


def max_var_id(*nodes) -> int:
    """Largest variable id anywhere in the nodes, binders included; -1 if
    none. Lets an engine advance its FreshIds past ids it did not mint."""
    top = -1

    def walk(x) -> None:
        nonlocal top
        if isinstance(x, Variable):
            top = max(top, x.id)
        elif isinstance(x, (Compound, Atom)):
            for a in x.args:
                walk(a)
        elif isinstance(x, AtomGoal):
            walk(x.atom)
        elif isinstance(x, Tensor):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Exists):
            walk(x.var)
            walk(x.body)
        elif isinstance(x, HornClause):
            for v in x.vars:
                walk(v)
            walk(x.head)
            if x.body is not None:
                walk(x.body)
        elif isinstance(x, Bang):
            walk(x.clause)
        elif isinstance(x, Choice):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Program):
            for clause in x.clauses:
                walk(clause)
        else:
            raise TypeError(f"cannot walk {type(x).__name__}")

    for node in nodes:
        walk(node)
    return top


def alpha_equal(a, b) -> bool:
    """Structural equality up to a bijective renaming of variable ids."""
    fwd: dict[int, int] = {}
    rev: dict[int, int] = {}

    def walk(x, y) -> bool:
        if isinstance(x, Variable) and isinstance(y, Variable):
            if x.id in fwd:
                return fwd[x.id] == y.id and rev.get(y.id) == x.id
            if y.id in rev:
                return False
            fwd[x.id] = y.id
            rev[y.id] = x.id
            return True
        if isinstance(x, Compound) and isinstance(y, Compound):
            return (x.functor == y.functor and len(x.args) == len(y.args)
                    and all(walk(p, q) for p, q in zip(x.args, y.args)))
        if isinstance(x, Atom) and isinstance(y, Atom):
            return (x.predicate == y.predicate and len(x.args) == len(y.args)
                    and all(walk(p, q) for p, q in zip(x.args, y.args)))
        if isinstance(x, AtomGoal) and isinstance(y, AtomGoal):
            return walk(x.atom, y.atom)
        if isinstance(x, Tensor) and isinstance(y, Tensor):
            return walk(x.left, y.left) and walk(x.right, y.right)
        if isinstance(x, Exists) and isinstance(y, Exists):
            return walk(x.var, y.var) and walk(x.body, y.body)
        if isinstance(x, HornClause) and isinstance(y, HornClause):
            if len(x.vars) != len(y.vars):
                return False
            if (x.body is None) != (y.body is None):
                return False
            if not walk(x.head, y.head):
                return False
            return x.body is None or walk(x.body, y.body)
        if isinstance(x, Bang) and isinstance(y, Bang):
            return walk(x.clause, y.clause)
        if isinstance(x, Choice) and isinstance(y, Choice):
            return walk(x.left, y.left) and walk(x.right, y.right)
        if isinstance(x, Program) and isinstance(y, Program):
            return (len(x.clauses) == len(y.clauses)
                    and all(walk(p, q) for p, q in zip(x.clauses, y.clauses)))
        return False

    return walk(a, b)

"""Concrete syntax: lexer, parser, and pretty-printer for .mup sources.

A source file is a sequence of items, each terminated by a period. An item is
either a plain clause or a choice between clauses:

    item   :=  leaf ( "(+)" leaf )* "."
    leaf   :=  ["!"] atom [":-" conj]
    conj   :=  primary ("," primary)*
    primary:=  atom | "(" conj ")"
    atom   :=  name ["(" term ("," term)* ")"]
    term   :=  variable | name ["(" term ("," term)* ")"]

Names starting with a lowercase letter or digit are constants/functors and are
case-normalized to lowercase (40K reads as 40k); single-quoted names keep
their spelling. Identifiers starting with an uppercase letter or underscore
are variables, scoped to their leaf. "%" starts a line comment. The unicode
forms of the connectives are accepted on input ("(+)" and "," are canonical
on output).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .terms import (
    Atom, AtomGoal, Bang, Choice, Compound, DFormula, Exists, FreshIds, Goal,
    HornClause, Program, Substitution, Tensor, Term, Variable, flatten_choice,
)


class ParseError(Exception):
    """Carries 1-based position, a human message, and the expected tokens."""

    def __init__(self, line: int, column: int, message: str,
                 expected: tuple[str, ...] = ()):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.expected = expected


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<string>"


_NAME_RE = re.compile(r"[a-z0-9][A-Za-z0-9_]*")
_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*")
_PLAIN_NAME_RE = re.compile(r"[a-z0-9][a-z0-9_]*\Z")
_PLAIN_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME QUOTED VAR LP RP COMMA DOT BANG IMPLIES CHOICE EOF
    text: str
    line: int
    col: int


def _describe(tok: _Token) -> str:
    return repr(tok.text) if tok.text else "end of input"


def _lex(src: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if src.startswith("(+)", i):
            toks.append(_Token("CHOICE", "(+)", start_line, start_col))
            i += 3
            col += 3
            continue
        if c == "⊕":  # circled plus
            toks.append(_Token("CHOICE", c, start_line, start_col))
            i += 1
            col += 1
            continue
        if c == "⊗" or c == ",":  # circled times reads as the comma
            toks.append(_Token("COMMA", c, start_line, start_col))
            i += 1
            col += 1
            continue
        if c in "().!":
            kind = {"(": "LP", ")": "RP", ".": "DOT", "!": "BANG"}[c]
            toks.append(_Token(kind, c, start_line, start_col))
            i += 1
            col += 1
            continue
        if c == ":":
            if src.startswith(":-", i):
                toks.append(_Token("IMPLIES", ":-", start_line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError(line, col, "expected ':-'", (":-",))
        if c == "'":
            j = src.find("'", i + 1)
            if j < 0 or "\n" in src[i + 1:j]:
                raise ParseError(line, col, "unterminated quoted name")
            content = src[i + 1:j]
            if not content:
                raise ParseError(line, col, "empty quoted name")
            toks.append(_Token("QUOTED", content, start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NAME_RE.match(src, i)
        if m:
            toks.append(_Token("NAME", m.group().lower(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _VAR_RE.match(src, i)
        if m:
            toks.append(_Token("VAR", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(line, col, f"unexpected character {c!r}")
    toks.append(_Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, tokens: list[_Token], fresh: FreshIds):
        self._toks = tokens
        self._pos = 0
        self._fresh = fresh
        self._scope: dict[str, Variable] = {}
        self._scope_order: list[Variable] = []

    def _peek(self) -> _Token:
        return self._toks[self._pos]

    def _next(self) -> _Token:
        tok = self._toks[self._pos]
        self._pos += 1
        return tok

    def _take(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != kind:
            raise ParseError(tok.line, tok.col,
                             f"expected {what}, found {_describe(tok)}", (what,))
        return self._next()

    def _reset_scope(self) -> None:
        self._scope = {}
        self._scope_order = []

    def _variable(self, tok: _Token) -> Variable:
        if tok.text == "_":
            v = Variable("_", self._fresh())
            self._scope_order.append(v)
            return v
        v = self._scope.get(tok.text)
        if v is None:
            v = Variable(tok.text, self._fresh())
            self._scope[tok.text] = v
            self._scope_order.append(v)
        return v

    def parse_program(self, origin: str) -> Program:
        items: list[DFormula] = []
        lines: list[int] = []
        while self._peek().kind != "EOF":
            lines.append(self._peek().line)
            items.append(self._item())
        names = tuple(pretty(d) for d in items)
        return Program(tuple(items), source_names=names, origin=origin,
                       lines=tuple(lines))

    def _item(self) -> DFormula:
        leaves = [self._leaf()]
        while self._peek().kind == "CHOICE":
            self._next()
            leaves.append(self._leaf())
        tok = self._peek()
        if tok.kind != "DOT":
            raise ParseError(tok.line, tok.col,
                             f"expected '.' or '(+)', found {_describe(tok)}",
                             (".", "(+)"))
        self._next()
        d: DFormula = Bang(leaves[-1])
        for leaf in reversed(leaves[:-1]):
            d = Choice(Bang(leaf), d)
        return d

    def _leaf(self) -> HornClause:
        self._reset_scope()
        if self._peek().kind == "BANG":
            self._next()
        head = self._atom()
        body: Optional[Goal] = None
        if self._peek().kind == "IMPLIES":
            self._next()
            body = self._conj()
        return HornClause(head, body, tuple(self._scope_order))

    def _conj(self) -> Goal:
        parts = [self._primary()]
        while self._peek().kind == "COMMA":
            self._next()
            parts.append(self._primary())
        goal = parts[-1]
        for part in reversed(parts[:-1]):
            goal = Tensor(part, goal)
        return goal

    def _primary(self) -> Goal:
        if self._peek().kind == "LP":
            self._next()
            inner = self._conj()
            self._take("RP", "')'")
            return inner
        return AtomGoal(self._atom())

    def _functor(self, what: str) -> str:
        tok = self._peek()
        if tok.kind in ("NAME", "QUOTED"):
            return self._next().text
        raise ParseError(tok.line, tok.col,
                         f"expected {what}, found {_describe(tok)}", ("name",))

    def _atom(self) -> Atom:
        pred = self._functor("a predicate name")
        return Atom(pred, self._args())

    def _args(self) -> tuple[Term, ...]:
        if self._peek().kind != "LP":
            return ()
        self._next()
        args = [self._term()]
        while self._peek().kind == "COMMA":
            self._next()
            args.append(self._term())
        self._take("RP", "')'")
        return tuple(args)

    def _term(self) -> Term:
        tok = self._peek()
        if tok.kind == "VAR":
            self._next()
            return self._variable(tok)
        functor = self._functor("a term")
        return Compound(functor, self._args())

    def parse_goal(self) -> tuple[Goal, tuple[Variable, ...]]:
        self._reset_scope()
        goal = self._conj()
        if self._peek().kind == "DOT":
            self._next()
        tok = self._peek()
        if tok.kind != "EOF":
            raise ParseError(tok.line, tok.col,
                             f"expected ',' or end of goal, found {_describe(tok)}",
                             (",",))
        for v in reversed(self._scope_order):
            goal = Exists(v, goal)
        query_vars = tuple(v for v in self._scope_order if v.name != "_")
        return goal, query_vars


def parse_program(src: Union[str, SourceProgram], origin: Optional[str] = None,
                  fresh: Optional[FreshIds] = None) -> Program:
    """Parse a full source into a Program. Raises ParseError.

    Variable ids come from `fresh` (a private counter by default); the engine
    renames clauses apart before use, so parse-time ids never leak into
    answers.
    """
    if isinstance(src, SourceProgram):
        text = src.text
        origin = origin or src.origin
    else:
        text = src
        origin = origin or "<string>"
    parser = _Parser(_lex(text), fresh or FreshIds())
    return parser.parse_program(origin)


def parse_goal(text: str, fresh: Optional[FreshIds] = None
               ) -> tuple[Goal, tuple[Variable, ...]]:
    """Parse a query. Free variables are wrapped existentially at the top
    (first occurrence outermost) and returned, minus anonymous "_", as the
    reportable query variables."""
    parser = _Parser(_lex(text), fresh or FreshIds())
    tok = parser._peek()
    if tok.kind == "EOF":
        raise ParseError(tok.line, tok.col, "expected a goal")
    return parser.parse_goal()


def _every_var(x) -> Iterator[Variable]:
    """All variable occurrences, including existential binders."""
    if isinstance(x, Variable):
        yield x
    elif isinstance(x, (Compound, Atom)):
        for a in x.args:
            yield from _every_var(a)
    elif isinstance(x, AtomGoal):
        yield from _every_var(x.atom)
    elif isinstance(x, Tensor):
        yield from _every_var(x.left)
        yield from _every_var(x.right)
    elif isinstance(x, Exists):
        yield x.var
        yield from _every_var(x.body)
    elif isinstance(x, HornClause):
        yield from _every_var(x.head)
        if x.body is not None:
            yield from _every_var(x.body)


def _display_names(x) -> dict[int, str]:
    """Pick a distinct, lexable display name per variable id, first occurrence
    keeping its own name and later same-named ids getting N_2, N_3, ..."""
    used: set[str] = set()
    names: dict[int, str] = {}
    for v in _every_var(x):
        if v.id in names:
            continue
        base = v.name if _PLAIN_VAR_RE.match(v.name) else f"V{v.id}"
        candidate = base
        counter = 1
        while candidate in used:
            counter += 1
            candidate = f"{base}_{counter}"
        used.add(candidate)
        names[v.id] = candidate
    return names


def _name_text(name: str) -> str:
    if _PLAIN_NAME_RE.match(name):
        return name
    if "'" in name or "\n" in name:
        raise ValueError(f"cannot render name {name!r} in concrete syntax")
    return f"'{name}'"


def _render(x, names: dict[int, str]) -> str:
    if isinstance(x, Variable):
        return names[x.id]
    if isinstance(x, Compound):
        if not x.args:
            return _name_text(x.functor)
        inner = ", ".join(_render(a, names) for a in x.args)
        return f"{_name_text(x.functor)}({inner})"
    if isinstance(x, Atom):
        if not x.args:
            return _name_text(x.predicate)
        inner = ", ".join(_render(a, names) for a in x.args)
        return f"{_name_text(x.predicate)}({inner})"
    if isinstance(x, AtomGoal):
        return _render(x.atom, names)
    if isinstance(x, Tensor):
        parts = [x.left]
        rest = x.right
        while isinstance(rest, Tensor):
            parts.append(rest.left)
            rest = rest.right
        parts.append(rest)
        texts = []
        for p in parts:
            t = _render(p, names)
            texts.append(f"({t})" if isinstance(p, Tensor) else t)
        return ", ".join(texts)
    if isinstance(x, Exists):
        # existentials have no written form; the variable prints free
        return _render(x.body, names)
    if isinstance(x, HornClause):
        head = _render(x.head, names)
        if x.body is None:
            return head
        return f"{head} :- {_render(x.body, names)}"
    raise TypeError(f"cannot render {type(x).__name__}")


def pretty(x) -> str:
    """Canonical text for any syntax node. parse(pretty(x)) is alpha-equal to
    x for programs, items, clauses, goals, atoms, and terms.

    Display names are resolved per leaf clause (matching the parser's
    variable scoping), so same-named variables in different clauses print
    unchanged while genuine collisions inside one clause get _2 suffixes.
    """
    if isinstance(x, Program):
        return "\n".join(pretty(d) + "." for d in x.clauses)
    if isinstance(x, Bang):
        return pretty(x.clause)
    if isinstance(x, Choice):
        return " (+) ".join(pretty(leaf) for leaf in flatten_choice(x))
    return _render(x, _display_names(x))


def format_bindings(subst: Substitution, query_vars: tuple[Variable, ...]
                    ) -> list[tuple[str, str]]:
    """Answer display pairs: one (variable name, term text) per query var."""
    out = []
    for v in query_vars:
        bound = subst.get(v.id)
        out.append((v.name, pretty(bound) if bound is not None else v.name))
    return out

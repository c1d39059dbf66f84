"""Lexing, parsing, and pretty-printing."""

import random

import pytest

from muprolog import (
    Atom, AtomGoal, Bang, Choice, Compound, Exists, HornClause, ParseError,
    SourceProgram, Substitution, Tensor, Variable, alpha_equal, constant,
    flatten_choice, format_bindings, parse_goal, parse_program, pretty,
)
from muprolog.oracle import random_case


def only_clause(text):
    program = parse_program(text)
    assert len(program.clauses) == 1
    (d,) = program.clauses
    assert isinstance(d, Bang)
    return d.clause


def test_fact_rule_and_arguments():
    clause = only_clause("path(X, Z) :- edge(X, Y), path(Y, Z).")
    assert clause.head.predicate == "path"
    assert [v.name for v in clause.vars] == ["X", "Z", "Y"]
    body = clause.body
    assert isinstance(body, Tensor)
    assert body.left.atom.predicate == "edge"
    assert body.right.atom.predicate == "path"
    # the two X occurrences are the same variable
    assert clause.head.args[0] == body.left.atom.args[0]


def test_choice_item_structure_and_order():
    program = parse_program("med (+) eng (+) eco.")
    (d,) = program.clauses
    assert isinstance(d, Choice)
    leaves = flatten_choice(d)
    assert [leaf.head.predicate for leaf in leaves] == ["med", "eng", "eco"]


def test_bang_is_optional_and_implied():
    explicit = parse_program("!p.\n!q (+) !r.")
    implicit = parse_program("p.\nq (+) r.")
    assert alpha_equal(explicit, implicit)


def test_unicode_connectives_read_as_ascii():
    uni = parse_program("q ⊕ r.\np :- s ⊗ t.")
    ascii_form = parse_program("q (+) r.\np :- s, t.")
    assert alpha_equal(uni, ascii_form)


def test_case_normalization_of_unquoted_names():
    clause = only_clause("tuition(40K) :- fooBar.")
    assert clause.head.args[0] == constant("40k")
    assert clause.body.atom.predicate == "foobar"


def test_quoted_names_keep_their_spelling():
    clause = only_clause("tuition('40K').")
    assert clause.head.args[0] == constant("40K")
    # and they round-trip through the printer
    text = pretty(parse_program("p('Hello world', '40K')."))
    assert text == "p('Hello world', '40K')."
    assert alpha_equal(parse_program(text), parse_program("p('Hello world', '40K')."))


def test_variables_scope_per_leaf():
    program = parse_program("p(X).\nq(X).")
    v1 = program.clauses[0].clause.head.args[0]
    v2 = program.clauses[1].clause.head.args[0]
    assert v1.name == v2.name == "X"
    assert v1.id != v2.id
    choice = parse_program("p(X) (+) q(X).")
    leaves = flatten_choice(choice.clauses[0])
    assert leaves[0].head.args[0].id != leaves[1].head.args[0].id


def test_anonymous_variables_are_all_distinct():
    clause = only_clause("p(_, _).")
    first, second = clause.head.args
    assert first.name == second.name == "_"
    assert first.id != second.id
    assert len(clause.vars) == 2


def test_comments_and_whitespace():
    program = parse_program("% header\np. % trailing\n\n   q.\n%only comment\n")
    assert len(program.clauses) == 2


def test_empty_source_is_an_empty_program():
    assert parse_program("").clauses == ()
    assert parse_program("% nothing\n").clauses == ()


def test_source_program_origin_and_lines():
    program = parse_program(SourceProgram("p.\n\nq (+) r.", "file.mup"))
    assert program.origin == "file.mup"
    assert program.item_origin(0) == "file.mup:1"
    assert program.item_origin(1) == "file.mup:3"
    assert program.source_names == ("p", "q (+) r")


@pytest.mark.parametrize("text,line,col,expected_piece", [
    ("p", 1, 2, "."),          # missing period
    ("p :- .", 1, 6, "name"),  # body cannot be empty
    ("p q.", 1, 3, "."),       # two atoms without a connective
    ("p(a.", 1, 4, ")"),       # unclosed argument list
    ("p :- q)", 1, 7, "."),    # stray close paren
    ("p : q.", 1, 3, ":-"),    # lone colon
    ("p('oops).", 1, 3, ""),   # unterminated quote
    ("p # q.", 1, 3, ""),      # stray character
    ("(+) p.", 1, 1, "name"),  # item cannot start with the connective
])
def test_parse_error_positions(text, line, col, expected_piece):
    with pytest.raises(ParseError) as err:
        parse_program(text)
    assert err.value.line == line
    assert err.value.column == col
    if expected_piece:
        assert any(expected_piece in e for e in err.value.expected)


def test_parse_error_line_tracking_across_newlines():
    with pytest.raises(ParseError) as err:
        parse_program("p.\nq(\nr.")
    assert err.value.line == 3
    assert err.value.column == 2  # the '.' after r ends the argument early


def test_parse_goal_wraps_free_variables_in_order():
    goal, query_vars = parse_goal("edge(Y, X), path(X, Z)")
    assert [v.name for v in query_vars] == ["Y", "X", "Z"]
    assert isinstance(goal, Exists) and goal.var.name == "Y"
    assert goal.body.var.name == "X"
    assert goal.body.body.var.name == "Z"
    assert isinstance(goal.body.body.body, Tensor)


def test_parse_goal_anonymous_vars_are_wrapped_but_not_reported():
    goal, query_vars = parse_goal("p(_, X)")
    assert [v.name for v in query_vars] == ["X"]
    assert isinstance(goal, Exists) and goal.var.name == "_"


def test_parse_goal_accepts_an_optional_trailing_period():
    g1, _ = parse_goal("p(a).")
    g2, _ = parse_goal("p(a)")
    assert alpha_equal(g1, g2)


def test_parse_goal_rejects_clutter():
    with pytest.raises(ParseError):
        parse_goal("p(a) q")
    with pytest.raises(ParseError):
        parse_goal("")
    with pytest.raises(ParseError):
        parse_goal("p :- q")


def test_pretty_canonicalizes_connectives():
    program = parse_program("p ⊕ q.\nr :- s ⊗ t.")
    assert pretty(program) == "p (+) q.\nr :- s, t."


def test_pretty_parenthesizes_nested_left_conjunction():
    program = parse_program("a :- (p, q), r.")
    body = program.clauses[0].clause.body
    assert isinstance(body.left, Tensor)
    text = pretty(program)
    assert text == "a :- (p, q), r."
    assert alpha_equal(parse_program(text), program)


def test_pretty_resolves_name_collisions_within_a_clause():
    x1 = Variable("X", 1)
    x2 = Variable("X", 2)
    clause = HornClause(Atom("p", (x1, x2, x1)), None, (x1, x2))
    assert pretty(clause) == "p(X, X_2, X)"
    reparsed = only_clause(pretty(clause) + ".")
    assert alpha_equal(reparsed, clause)


def test_pretty_same_name_in_different_clauses_is_untouched():
    program = parse_program("p(X) :- q(X).\nr(X) :- s(X).")
    assert pretty(program) == "p(X) :- q(X).\nr(X) :- s(X)."


def test_exists_prints_as_its_body():
    goal, _ = parse_goal("p(X), q(X)")
    assert pretty(goal) == "p(X), q(X)"


def test_format_bindings_reports_each_query_var():
    goal, query_vars = parse_goal("p(X, Y)")
    x, y = query_vars
    s = Substitution({x.id: constant("a")})
    assert format_bindings(s, query_vars) == [("X", "a"), ("Y", "Y")]


def test_roundtrip_bundled_programs():
    import pathlib
    for path in sorted(pathlib.Path("programs").glob("*.mup")):
        source = path.read_text()
        program = parse_program(source, origin=str(path))
        text = pretty(program)
        again = parse_program(text)
        assert alpha_equal(again, program), path
        assert pretty(again) == text, path


def test_roundtrip_generated_programs():
    rng = random.Random(42)
    for _ in range(200):
        program_text, goal_text = random_case(rng)
        program = parse_program(program_text)
        text = pretty(program)
        assert alpha_equal(parse_program(text), program)
        goal, _ = parse_goal(goal_text)
        goal_again, _ = parse_goal(pretty(goal))
        assert alpha_equal(goal_again, goal)

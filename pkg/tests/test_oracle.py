"""World enumeration, ground bottom-up truth, and the engine cross-checks."""

import pytest

from muprolog import (
    HornWorld, NotFunctionFree, Outcome, Selection, WorldLimitExceeded,
    bottom_up_solve, check_choice_independence, check_pv_oracle,
    enumerate_selections, parse_goal, parse_program, pretty, random_case,
    random_corpus, world_program,
)

BMW = "twodoor (+) fourdoor.\ndiesel (+) gas.\n" \
      "bmw(120d) :- twodoor, diesel.\nbmw(120) :- twodoor, gas.\n" \
      "bmw(320d) :- fourdoor, diesel.\nbmw(320) :- fourdoor, gas."


def test_enumerate_selections_is_lexicographic():
    program = parse_program(BMW)
    worlds = enumerate_selections(program)
    assert [sel.picks for sel, _ in worlds] == \
        [(0, 0), (0, 1), (1, 0), (1, 1)]
    first_world = worlds[0][1]
    assert [c.head.predicate for c in first_world.clauses[:2]] == \
        ["twodoor", "diesel"]
    last_world = worlds[-1][1]
    assert [c.head.predicate for c in last_world.clauses[:2]] == \
        ["fourdoor", "gas"]
    assert all(len(w.clauses) == 6 for _, w in worlds)


def test_enumerate_selections_without_choices_gives_one_world():
    program = parse_program("p.\nq :- p.")
    worlds = enumerate_selections(program)
    assert len(worlds) == 1
    assert worlds[0][0].picks == ()


def test_enumerate_selections_respects_the_cap():
    text = "\n".join(f"a{i} (+) b{i}." for i in range(13))  # 8192 worlds
    program = parse_program(text)
    with pytest.raises(WorldLimitExceeded):
        enumerate_selections(program)
    assert len(enumerate_selections(program, cap=10000)) == 8192


def test_world_program_applies_the_selection():
    program = parse_program(BMW)
    world = world_program(program, Selection((1, 0)))
    assert pretty(world).splitlines()[:2] == ["fourdoor.", "diesel."]
    assert len(world.clauses) == len(program.clauses)
    with pytest.raises(ValueError):
        world_program(program, Selection((1,)))


def test_bottom_up_closure_of_ground_facts_and_rules():
    program = parse_program(
        "edge(a, b).\nedge(b, c).\n"
        "path(X, Y) :- edge(X, Y).\npath(X, Z) :- edge(X, Y), path(Y, Z).")
    world = enumerate_selections(program)[0][1]
    goal, _ = parse_goal("path(a, c)")
    report = bottom_up_solve(world, goal)
    assert report.holds
    goal2, _ = parse_goal("path(c, X)")
    assert not bottom_up_solve(world, goal2).holds
    goal3, _ = parse_goal("path(a, X)")
    report3 = bottom_up_solve(world, goal3)
    assert report3.holds
    assert {w["X"] for w in report3.witnesses} == {"b", "c"}


def test_bottom_up_grounds_clause_variables_over_the_universe():
    program = parse_program("p(X).\nq(a).")
    world = enumerate_selections(program)[0][1]
    goal, _ = parse_goal("p(a)")
    assert bottom_up_solve(world, goal).holds


def test_bottom_up_synthesizes_a_constant_when_none_exist():
    program = parse_program("p(X).")
    world = enumerate_selections(program)[0][1]
    goal, _ = parse_goal("p(Y)")
    report = bottom_up_solve(world, goal)
    assert report.holds
    assert report.witnesses and list(report.witnesses[0]) == ["Y"]


def test_bottom_up_handles_existentials_inside_bodies():
    program = parse_program("q(a).\np :- q(X).")
    world = enumerate_selections(program)[0][1]
    goal, _ = parse_goal("p")
    assert bottom_up_solve(world, goal).holds


def test_bottom_up_rejects_function_symbols():
    program = parse_program("p(f(a)).")
    world = enumerate_selections(program)[0][1]
    goal, _ = parse_goal("p(X)")
    with pytest.raises(NotFunctionFree):
        bottom_up_solve(world, goal)


def test_pv_oracle_agreement_on_bmw():
    program = parse_program(BMW)
    goal, _ = parse_goal("bmw(X)")
    report = check_pv_oracle(program, goal)
    assert report.worlds == 4
    assert report.true_worlds == 4
    assert report.pv_outcome is Outcome.SUCCESS
    assert report.conclusive and report.agrees

    goal2, _ = parse_goal("bmw(120d)")
    report2 = check_pv_oracle(program, goal2)
    assert report2.true_worlds == 1
    assert not report2.expected_success
    assert report2.pv_outcome is Outcome.FAILURE
    assert report2.agrees


def test_pv_oracle_is_inconclusive_on_a_depth_limited_run():
    from muprolog import SearchConfig
    program = parse_program("p :- p.")
    goal, _ = parse_goal("p")
    report = check_pv_oracle(program, goal, SearchConfig(depth_limit=8))
    assert not report.conclusive
    assert report.pv_outcome is Outcome.DEPTH_EXCEEDED


def test_choice_independence_on_bmw_and_asymmetric_answers():
    program = parse_program(BMW)
    goal, _ = parse_goal("bmw(X)")
    report = check_choice_independence(program, goal)
    assert report.scripts == 4
    assert report.agrees and not report.disagreements

    asym = parse_program("r(a) (+) r(b).\ns(X) :- r(X).")
    goal2, _ = parse_goal("s(X)")
    report2 = check_choice_independence(asym, goal2)
    assert report2.scripts == 2
    assert report2.agrees


def test_random_case_is_deterministic_per_seed():
    import random
    a = [random_case(random.Random(7)) for _ in range(3)]
    b = [random_case(random.Random(7)) for _ in range(3)]
    assert a[0] == b[0]
    assert a == b


def test_random_corpus_programs_stay_within_bounds():
    for program, goal in random_corpus(seed=5, count=50):
        assert 1 <= len(program.clauses) <= 6
        groups = [d for d in program.clauses
                  if not hasattr(d, "clause")]
        assert len(groups) <= 3
        worlds = enumerate_selections(program)
        assert 1 <= len(worlds) <= 27
        # function-free: bottom_up accepts every world
        for _, world in worlds:
            bottom_up_solve(world, goal)


def test_corpus_cross_checks_agree():
    for program, goal in random_corpus(seed=11, count=100):
        r1 = check_pv_oracle(program, goal)
        assert r1.conclusive and r1.agrees, pretty(program)
        r2 = check_choice_independence(program, goal)
        assert r2.agrees, pretty(program)

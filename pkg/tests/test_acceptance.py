"""End-to-end acceptance gate.

Each test checks one shipping criterion and prints one PASS/FAIL line
(visible with -s; pytest -v shows the same verdict per test either way).
"""

import io
import random
import time
from pathlib import Path

from muprolog import (
    CountingProvider, Engine, Outcome, alpha_equal, check_choice_independence,
    check_pv_oracle, ex, make_script_provider, mgu, parse_goal, parse_program,
    pretty, pv, random_case, random_corpus,
)
from muprolog.cli import run_file
from muprolog.terms import Compound, FreshIds, Variable

from _gen import is_idempotent, term_pair

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"
CORPUS_SEED = 20260814
CORPUS_SIZE = 1000


def report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def run_cli(program, query, script=None):
    out, err = io.StringIO(), io.StringIO()
    started = time.perf_counter()
    code = run_file(str(PROGRAMS / program), query, out=out, err=err,
                    mode="pv" if script is None else "ex", choices=script)
    elapsed = time.perf_counter() - started
    return code, out.getvalue(), elapsed


def test_acceptance_car_dealer_scripts_reach_each_model():
    answers, slowest = {}, 0.0
    for script in ((0, 0), (0, 1), (1, 0), (1, 1)):
        code, out, elapsed = run_cli("bmw.mup", "bmw(X)", script)
        slowest = max(slowest, elapsed)
        assert code == 0, f"script {script} exited {code}"
        assert elapsed < 1.0, f"script {script} took {elapsed:.2f}s"
        answers[script] = out.strip()
    report(
        "car dealer scripts",
        answers == {(0, 0): "X = 120d", (0, 1): "X = 120",
                    (1, 0): "X = 320d", (1, 1): "X = 320"},
        f"{sorted(answers.values())} in <= {slowest * 1000:.0f} ms per run")


def test_acceptance_tuition_scripts_reach_each_amount():
    answers, slowest = {}, 0.0
    for index, amount in ((0, "40k"), (1, "30k"), (2, "20k")):
        code, out, elapsed = run_cli("tuition.mup", "tuition(X)", (index,))
        slowest = max(slowest, elapsed)
        assert code == 0 and elapsed < 1.0
        answers[index] = (out.strip(), f"X = {amount}")
    report(
        "tuition scripts",
        all(got == want for got, want in answers.values()),
        f"[0],[1],[2] -> {[got for got, _ in answers.values()]} "
        f"in <= {slowest * 1000:.0f} ms per run")


def test_acceptance_batch_mode_never_consults_the_provider():
    fresh = FreshIds()
    program = parse_program((PROGRAMS / "bmw.mup").read_text(), fresh=fresh)
    goal, _ = parse_goal("bmw(X)", fresh)
    probe = CountingProvider()  # raises if ever consulted
    result = Engine(provider=probe, fresh=fresh).run(
        program, goal, interactive=False)
    report(
        "batch mode provider purity",
        result.outcome is Outcome.SUCCESS and probe.calls == 0,
        f"outcome {result.outcome.name} with {probe.calls} provider calls")


def test_acceptance_batch_outcomes_match_world_enumeration():
    started = time.perf_counter()
    conclusive = agreed = inconclusive = 0
    for program, goal in random_corpus(seed=CORPUS_SEED, count=CORPUS_SIZE):
        outcome = check_pv_oracle(program, goal)
        if not outcome.conclusive:
            inconclusive += 1
            continue
        conclusive += 1
        agreed += outcome.agrees
    elapsed = time.perf_counter() - started
    report(
        "batch prover vs world enumeration",
        agreed == conclusive and inconclusive < CORPUS_SIZE * 0.01
        and elapsed < 60.0,
        f"{agreed}/{conclusive} conclusive runs agree, "
        f"{inconclusive} inconclusive, {elapsed:.1f}s for {CORPUS_SIZE}")


def test_acceptance_interactive_outcome_is_choice_independent():
    started = time.perf_counter()
    agreed = total = scripts = 0
    for program, goal in random_corpus(seed=CORPUS_SEED, count=CORPUS_SIZE):
        outcome = check_choice_independence(program, goal)
        total += 1
        agreed += outcome.agrees
        scripts += outcome.scripts
    elapsed = time.perf_counter() - started
    report(
        "choice independence",
        agreed == total and elapsed < 60.0,
        f"{agreed}/{total} programs agree across {scripts} scripts, "
        f"{elapsed:.1f}s")


def test_acceptance_choice_is_not_plain_disjunction():
    fresh = FreshIds()
    program = parse_program("p (+) q.", fresh=fresh)
    goal, _ = parse_goal("p", fresh)
    outcomes = [pv(program, goal, fresh=fresh).outcome]
    for script in ((0,), (1,)):
        outcomes.append(
            ex(program, goal, make_script_provider(script), fresh=fresh)
            .outcome)
    report(
        "choice item does not prove its leaf",
        all(outcome is Outcome.FAILURE for outcome in outcomes),
        f"pv/ex[0]/ex[1] -> {[outcome.name for outcome in outcomes]}")


def test_acceptance_unifier_soundness_and_idempotence_at_scale():
    rng = random.Random(CORPUS_SEED)
    unified = violations = 0
    for _ in range(10_000):
        a, b = term_pair(rng)
        s = mgu(a, b)
        if s is None:
            continue
        unified += 1
        if s.apply(a) != s.apply(b) or not is_idempotent(s):
            violations += 1
    x = Variable("X", 1_000_001)
    occurs_fails = mgu(x, Compound("f", (x,))) is None
    report(
        "unifier at scale",
        violations == 0 and occurs_fails and unified > 100,
        f"{unified}/10000 pairs unified, {violations} violations, "
        f"x ~ f(x) rejected: {occurs_fails}")


def test_acceptance_parse_pretty_round_trip():
    checked = 0
    for path in sorted(PROGRAMS.glob("*.mup")):
        program = parse_program(path.read_text(), origin=path.name)
        again = parse_program(pretty(program), origin=path.name)
        assert alpha_equal(program, again), path.name
        checked += 1
    rng = random.Random(CORPUS_SEED)
    for _ in range(1000):
        text, _ = random_case(rng)
        program = parse_program(text)
        again = parse_program(pretty(program))
        assert alpha_equal(program, again), text
        checked += 1
    report("parse/pretty round trip",
           checked == 1000 + len(list(PROGRAMS.glob("*.mup"))),
           f"{checked} programs survive parse(pretty(parse(text)))")


def test_acceptance_self_recursion_hits_the_depth_limit_quickly():
    fresh = FreshIds()
    program = parse_program("p :- p.", fresh=fresh)
    goal, _ = parse_goal("p", fresh)
    started = time.perf_counter()
    result = pv(program, goal, fresh=fresh)  # default depth limit
    elapsed = time.perf_counter() - started
    report(
        "self recursion is cut off",
        result.outcome is Outcome.DEPTH_EXCEEDED and elapsed < 1.0,
        f"outcome {result.outcome.name} in {elapsed * 1000:.0f} ms")

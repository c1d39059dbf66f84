"""Command line behavior: run_file outcomes, flags, and arg validation."""

import io
import subprocess
import sys
from pathlib import Path

import pytest

from muprolog.cli import build_parser, main, run_file

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def run(path, query, **kwargs):
    out, err = io.StringIO(), io.StringIO()
    code = run_file(str(path), query, out=out, err=err, **kwargs)
    return code, out.getvalue(), err.getvalue()


def test_pv_success_prints_every_answer():
    code, out, err = run(PROGRAMS / "bmw.mup", "bmw(X)")
    assert code == 0
    assert out == "X = 120d\n"  # canonical world: first leaf of each group
    assert err == ""


def test_pv_ground_success_prints_yes():
    # reachable whether the ferry runs or the bridge is open
    code, out, _ = run(PROGRAMS / "travel.mup", "path(home, summit)")
    assert (code, out) == (0, "yes.\n")


def test_pv_failure_prints_no_and_exits_1():
    code, out, _ = run(PROGRAMS / "bmw.mup", "bmw(911)")
    assert (code, out) == (1, "no.\n")


def test_depth_exceeded_exits_2():
    code, out, _ = run(PROGRAMS / "loop.mup", "p")
    assert (code, out) == (2, "depth limit exceeded.\n")


@pytest.mark.parametrize("script, car", [
    ((0, 0), "120d"), ((0, 1), "120"), ((1, 0), "320d"), ((1, 1), "320"),
])
def test_ex_scripts_pick_each_car(script, car):
    code, out, _ = run(PROGRAMS / "bmw.mup", "bmw(X)",
                       mode="ex", choices=script)
    assert code == 0
    assert out == f"X = {car}\n"


def test_ex_console_input_drives_choices():
    code, out, _ = run(PROGRAMS / "tuition.mup", "tuition(X)", mode="ex",
                       choice_input=io.StringIO("1\n"))
    assert code == 0
    assert "choice [0-2]> " in out
    assert out.endswith("X = 30k\n")


def test_choices_with_pv_mode_is_an_error():
    code, _, err = run(PROGRAMS / "bmw.mup", "bmw(X)", choices=(0, 0))
    assert code == 2
    assert "--choices only applies to --mode ex" in err


def test_script_too_short_is_an_error():
    code, _, err = run(PROGRAMS / "bmw.mup", "bmw(X)", mode="ex",
                       choices=(0,))
    assert code == 2
    assert "mup: " in err


def test_missing_file_and_parse_errors(tmp_path):
    code, _, err = run(tmp_path / "absent.mup", "p")
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.mup"
    bad.write_text("p :- .\n")
    code2, _, err2 = run(bad, "p")
    assert code2 == 2
    assert err2.startswith(f"{bad}:1:6: ")
    code3, _, err3 = run(PROGRAMS / "pq.mup", "p(")
    assert code3 == 2
    assert err3.startswith("query:1:3: ")


def test_depth_flag_controls_the_limit(tmp_path):
    chain = tmp_path / "chain.mup"
    chain.write_text("p0.\np1 :- p0.\np2 :- p1.\np3 :- p2.\n")
    assert run(chain, "p3", depth=3)[0] == 0  # three nested rule bodies
    code, out, _ = run(chain, "p3", depth=2)
    assert (code, out) == (2, "depth limit exceeded.\n")


def test_trace_goes_to_stderr():
    code, out, err = run(PROGRAMS / "pq.mup", "p", trace=True)
    assert code == 1
    assert "trace:" not in out
    assert 'trace: {"kind": "enter_phase1"' in err


def test_occurs_check_flag(tmp_path):
    prog = tmp_path / "eq.mup"
    prog.write_text("eq(X, X).\n")
    assert run(prog, "eq(Y, f(Y))")[0] == 1
    assert run(prog, "eq(Y, f(Y))", occurs_check=False)[0] == 0


def test_main_wires_the_run_arguments(tmp_path, capsys):
    prog = tmp_path / "t.mup"
    prog.write_text("med (+) eng.\nt(1) :- med.\nt(2) :- eng.\n")
    assert main(["run", str(prog), "-q", "t(X)", "--mode", "ex",
                 "--choices", "1"]) == 0
    assert capsys.readouterr().out == "X = 2\n"
    assert main(["run", str(prog), "-q", "t(X)"]) == 0
    assert capsys.readouterr().out == "X = 1\n"


def test_parser_rejects_bad_values():
    parser = build_parser()
    for argv in (
        ["run", "f.mup"],                                # missing --query
        ["run", "f.mup", "-q", "p", "--mode", "zen"],
        ["run", "f.mup", "-q", "p", "--choices", "a,b"],
        ["run", "f.mup", "-q", "p", "--depth", "0"],
        ["run", "f.mup", "-q", "p", "--depth", "x"],
        [],                                              # command required
    ):
        with pytest.raises(SystemExit):
            parser.parse_args(argv)


def test_serve_transport_validation(capsys):
    assert main(["serve"]) == 2
    assert "exactly one of" in capsys.readouterr().err
    assert main(["serve", "--port", "1", "--stdio"]) == 2


def test_console_script_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "muprolog", "run", str(PROGRAMS / "pq.mup"),
         "-q", "p, q"],
        capture_output=True, text=True)
    assert result.returncode == 1  # no single world proves both
    assert result.stdout == "no.\n"
    result2 = subprocess.run(
        ["mup", "run", str(PROGRAMS / "tuition.mup"), "-q", "tuition(X)",
         "--mode", "ex", "--choices", "0"],
        capture_output=True, text=True)
    assert result2.returncode == 0
    assert result2.stdout.strip() == "X = 40k"

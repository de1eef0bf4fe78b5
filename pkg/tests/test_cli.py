import io
import subprocess
import sys

import pytest

from frmagic.cli import EXIT_ERROR, EXIT_LIMIT, EXIT_OK, main
from frmagic.parser import parse_program

EXAMPLE = """\
lessThan(X,s(X)).
lessThan(X,s(Y)) :- lessThan(X,Y).
greaterThan(s(X),Y) :- not lessThan(X,Y).
"""
QUERY = "greaterThan(s(s(0)),0)?"

UNARY_TM = """\
alphabet: a _
states: si sf
initial: si
final: sf
delta: si a -> si a R
delta: si _ -> sf _ R
"""


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(list(argv), out, err)
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def example(tmp_path):
    f = tmp_path / "example.lp"
    f.write_text(EXAMPLE)
    return str(f)


@pytest.mark.parametrize("mode", ["cautious", "brave"])
def test_query_example(example, mode):
    code, out, _ = run("query", example, QUERY, "--mode", mode)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "true"


def test_query_false_shows_counter_model(example):
    code, out, _ = run("query", example, "greaterThan(s(0),s(0))?")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "false"
    assert lines[1].startswith("% counter-model: {")


def test_query_record_format(example):
    code, out, _ = run("query", example, QUERY, "--format", "record", "--mode", "brave")
    assert code == EXIT_OK
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert fields["answer"] == "true"
    assert fields["mode"] == "brave"
    assert fields["models"] == "1"
    assert "greaterThan(s(s(0)),0)" in fields["witness"]


def test_fr_safety_diagnostic(tmp_path):
    f = tmp_path / "p.lp"
    f.write_text("p(X) :- q(X,Y).\n")
    code, out, err = run("query", str(f), "p(0)?")
    assert code == EXIT_ERROR
    assert out == ""
    assert "fr-safe" in err and "Y" in err


def test_unstratified_rejected(tmp_path):
    f = tmp_path / "p.lp"
    f.write_text("p(0) :- not p(0).\n")
    code, _, err = run("query", str(f), "p(0)?")
    assert code == EXIT_ERROR
    assert "stratified" in err


def test_rewrite_example(example):
    code, out, _ = run("rewrite", example, QUERY)
    assert code == EXIT_OK
    assert parse_program(out, allow_magic=True) == parse_program("""
        magic_greaterThan(s(s(0)),0).
        magic_lessThan(X,Y) :- magic_greaterThan(s(X),Y).
        magic_lessThan(X,Y) :- magic_lessThan(X,s(Y)).
        greaterThan(s(X),Y) :- magic_greaterThan(s(X),Y), not lessThan(X,Y).
        lessThan(X,s(X)) :- magic_lessThan(X,s(X)).
        lessThan(X,s(Y)) :- magic_lessThan(X,s(Y)), lessThan(X,Y).
    """)


def test_rewrite_sections_and_seed(example):
    _, out, _ = run("rewrite", example, QUERY, "--sections")
    assert [l for l in out.splitlines() if l.startswith("%")] == ["% magic", "% modified", "% edb"]
    _, seeded, _ = run("rewrite", example, QUERY, "--seed")
    assert "aux(s(s(0)),0)." in seeded.splitlines()


def test_ground_rewrite(example, tmp_path):
    _, rw, _ = run("rewrite", example, QUERY)
    f = tmp_path / "rw.lp"
    f.write_text(rw)
    code, out, _ = run("ground", str(f))
    assert code == EXIT_OK
    assert [l for l in out.splitlines() if not l.startswith("magic_")] == ["greaterThan(s(s(0)),0)."]
    _, stats, _ = run("ground", str(f), "--stats")
    assert "% {greaterThan}: 1 rule(s), 2 iteration(s)" in stats


def test_analyze_example(example):
    code, out, _ = run("analyze", example)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert "stratified: yes" in lines
    assert "ordering: <{lessThan}, {greaterThan}>" in lines
    assert "edge: {lessThan} -> {greaterThan} (-)" in lines
    _, out, _ = run("analyze", example, QUERY)
    assert "fr-safe: yes" in out.splitlines()


def test_analyze_reports_cycle(tmp_path):
    f = tmp_path / "p.lp"
    f.write_text("p :- not q. q :- p.\n")
    code, out, _ = run("analyze", str(f))
    assert code == EXIT_OK
    assert "stratified: no" in out
    assert "cycle:" in out


def test_composition_matches_query(example, tmp_path):
    _, rw, _ = run("rewrite", example, QUERY, "--seed")
    _, ground, _ = run("ground", "-", stdin=rw)
    _, chained, _ = run("solve", "-", stdin=ground)
    _, direct, _ = run("query", example, QUERY, "--stop-after", "solve")
    assert chained == direct
    _, direct_ground, _ = run("query", example, QUERY, "--stop-after", "ground")
    assert parse_program(direct_ground) == parse_program(ground)


def test_solve_output(tmp_path):
    f = tmp_path / "p.lp"
    f.write_text("a v b.\n")
    code, out, _ = run("solve", str(f))
    assert (code, out) == (EXIT_OK, "{a}\n{b}\n")
    f.write_text("a :- not a.\n")
    assert run("solve", str(f))[1] == "% no stable models\n"
    f.write_text("a v b. c v d.\n")
    code, out, err = run("solve", str(f), "--cap", "2")
    assert code == EXIT_LIMIT
    assert len(out.splitlines()) == 2 and "limit" in err
    _, rec, _ = run("solve", str(f), "--format", "record")
    assert rec.splitlines()[0] == "models: 4"


def test_limits_exit_code(tmp_path):
    f = tmp_path / "p.lp"
    f.write_text("nat(0). nat(s(X)) :- nat(X).\n")
    code, _, err = run("ground", str(f), "--max-iterations", "20")
    assert code == EXIT_LIMIT
    assert "limit" in err


def test_query_sources(example, tmp_path):
    qf = tmp_path / "q.txt"
    qf.write_text(QUERY + "\n")
    code, out, _ = run("query", example, "--query-file", str(qf))
    assert code == EXIT_OK and out.startswith("true")
    code, _, err = run("query", example, QUERY, "--query-file", str(qf))
    assert code == EXIT_ERROR and "not both" in err
    assert run("query", example)[0] == EXIT_ERROR
    assert run("rewrite", example)[0] == EXIT_ERROR


def test_usage_errors(tmp_path):
    assert run("query", str(tmp_path / "missing.lp"), "p?")[0] == EXIT_ERROR
    assert run("bogus")[0] == EXIT_ERROR
    f = tmp_path / "bad.lp"
    f.write_text("p(X :- q.\n")
    code, _, err = run("query", str(f), "p?")
    assert code == EXIT_ERROR and "error" in err
    f.write_text("magic_p(0).\np(0).\n")
    assert run("query", str(f), "p(0)?")[0] == EXIT_ERROR


def test_tm_compile(tmp_path):
    spec = tmp_path / "m.tm"
    spec.write_text(UNARY_TM)
    code, out, _ = run("tm-compile", str(spec), "--input", "aa")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "conf(si,[],a,[a])?"
    prog, q = tmp_path / "m.lp", tmp_path / "q.txt"
    run("tm-compile", str(spec), "--input", "aa", "--program-out", str(prog), "--query-out", str(q))
    code, out, _ = run("query", str(prog), "--query-file", str(q))
    assert code == EXIT_OK and out.startswith("true")
    spec.write_text("alphabet: a\n")
    assert run("tm-compile", str(spec))[0] == EXIT_ERROR


def test_output_is_deterministic(example):
    for argv in (("query", example, QUERY), ("rewrite", example, QUERY), ("analyze", example, QUERY)):
        assert len({run(*argv)[1] for _ in range(3)}) == 1


def test_module_entry_point(example):
    proc = subprocess.run([sys.executable, "-m", "frmagic", "query", example, QUERY],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "true"

import pytest

from frmagic.analysis import ComponentOrdering, component_ordering
from frmagic.errors import LimitExceeded, PreconditionViolation, UnsafeRule
from frmagic.grounder import (
    GroundingLimits,
    GroundProgram,
    inst,
    intelligent_instantiation,
    least_model,
    phi_fixpoint,
    simpl,
)
from frmagic.magic import dms_rewrite, seed_query
from frmagic.parser import parse_atom, parse_program, parse_query, parse_rules
from frmagic.solver import stable_models
from frmagic.syntax import apply_rule, match_atom

from corpus import corpus

EXAMPLE = parse_program("""
lessThan(X,s(X)).
lessThan(X,s(Y)) :- lessThan(X,Y).
greaterThan(s(X),Y) :- not lessThan(X,Y).
""")
QUERY = parse_query("greaterThan(s(s(0)),0)?")
fs = frozenset


def atoms(*texts):
    return [parse_atom(t) for t in texts]


def test_inst_examples():
    got = inst(parse_rules("p(f(X)) :- q(X)."), atoms("q(0)", "q(f(0))"))
    assert sorted(map(str, got)) == ["p(f(0)) :- q(0).", "p(f(f(0))) :- q(f(0))."]
    assert inst(parse_rules("p(0) :- q(0)."), []) == ()
    with pytest.raises(UnsafeRule):
        inst(parse_rules("lessThan(X,s(X))."), atoms("lessThan(0,s(0))"))


def test_inst_negative_only_variable_is_unsafe():
    with pytest.raises(UnsafeRule) as err:
        inst(parse_rules("p(X) :- q(Y), not r(X)."), atoms("q(0)"))
    assert err.value.variables == ("X",)


def test_inst_join_shares_bindings():
    got = inst(parse_rules("p(X,Z) :- e(X,Y), e(Y,Z)."), atoms("e(a,b)", "e(b,c)", "e(c,a)"))
    assert sorted(map(str, got)) == [
        "p(a,c) :- e(a,b), e(b,c).",
        "p(b,a) :- e(b,c), e(c,a).",
        "p(c,b) :- e(c,a), e(a,b).",
    ]


def test_simpl_examples():
    two = ComponentOrdering((fs({"c"}), fs({"a"})))
    got = simpl(parse_rules("a :- b, not c."), parse_rules("b."), two, 1)
    assert [str(r) for r in got] == ["a."]
    assert simpl(parse_rules("a :- b."), parse_rules("a."), two, 1) == ()
    assert simpl(parse_rules("a :- not b."), parse_rules("b."), ComponentOrdering((fs({"b"}), fs({"a"}))), 1) == ()


def test_simpl_keeps_negation_on_derivable_atom():
    o = ComponentOrdering((fs({"c"}), fs({"a"})))
    got = simpl(parse_rules("a :- not c."), parse_rules("c :- d."), o, 1)
    assert [str(r) for r in got] == ["a :- not c."]


def test_simpl_rejects_negation_inside_component():
    o = ComponentOrdering((fs({"a", "c"}),))
    with pytest.raises(PreconditionViolation):
        simpl(parse_rules("a :- not c."), (), o, 0)


def test_phi_fixpoint_magic_component():
    rw = dms_rewrite(EXAMPLE, QUERY)
    o = component_ordering(rw.program)
    got = phi_fixpoint(rw.magic_rules[1:], rw.magic_rules[:1], o, 0)
    assert [str(r) for r in got] == ["magic_lessThan(s(0),0)."]
    raw = phi_fixpoint(rw.magic_rules[1:], rw.magic_rules[:1], o, 0, simplify=False)
    assert [str(r) for r in raw] == ["magic_lessThan(s(0),0) :- magic_greaterThan(s(s(0)),0)."]


def test_phi_fixpoint_empty_and_limits():
    o = ComponentOrdering((fs({"p"}),))
    assert phi_fixpoint((), (), o, 0) == ()
    with pytest.raises(LimitExceeded) as err:
        phi_fixpoint(parse_rules("p(s(X)) :- p(X)."), parse_rules("p(0)."), o, 0,
                     GroundingLimits(max_iterations=3))
    assert err.value.iterations == 3
    with pytest.raises(LimitExceeded):
        phi_fixpoint(parse_rules("p(s(X)) :- p(X)."), parse_rules("p(0)."), o, 0,
                     GroundingLimits(max_ground_rules=10))


def test_limits_validated():
    with pytest.raises(ValueError):
        GroundingLimits(max_ground_rules=0)


def test_example_rewrite_grounds_finitely():
    rw = dms_rewrite(EXAMPLE, QUERY)
    g = intelligent_instantiation(rw.program, component_ordering(rw.program))
    non_magic = [str(r) for r in g.rules if not r.head[0].predicate.startswith("magic_")]
    # the negative literal has no derivable atom in a lower component, so it is simplified away
    assert non_magic == ["greaterThan(s(s(0)),0)."]
    assert {str(r) for r in g.rules} == {
        "magic_greaterThan(s(s(0)),0).",
        "magic_lessThan(s(0),0).",
        "greaterThan(s(s(0)),0).",
    }
    raw = intelligent_instantiation(rw.program, component_ordering(rw.program), simplify=False)
    assert "greaterThan(s(s(0)),0) :- magic_greaterThan(s(s(0)),0), not lessThan(s(0),0)." in {
        str(r) for r in raw.rules
    }


def test_pure_edb_program():
    p = parse_program("e(0). e(1). f(a).")
    g = intelligent_instantiation(p, component_ordering(p))
    assert g.rules == p.rules


def test_original_example_is_unsafe():
    with pytest.raises(UnsafeRule):
        intelligent_instantiation(EXAMPLE, component_ordering(EXAMPLE))


def test_ground_program_views():
    g = GroundProgram.from_rules(parse_rules("a v b :- c. c. c."))
    assert len(g) == 2
    assert g.derived_atoms == {parse_atom("a"), parse_atom("b"), parse_atom("c")}
    with pytest.raises(ValueError):
        GroundProgram.from_rules(parse_rules("p(X) :- q(X)."))


def test_stats_per_component():
    rw = dms_rewrite(EXAMPLE, QUERY)
    g = intelligent_instantiation(rw.program, component_ordering(rw.program))
    assert [(s.component, s.rules) for s in g.stats] == [
        (("magic_lessThan",), 1), (("lessThan",), 0), (("greaterThan",), 1)
    ]


def test_least_model():
    m = least_model(parse_rules("p(0). p(s(X)) :- p(X), q(X). q(0)."))
    assert set(map(str, m)) == {"p(0)", "q(0)", "p(s(0))"}
    with pytest.raises(PreconditionViolation):
        least_model(parse_rules("a v b."))


def _instance_of(r, rg):
    """Some substitution maps ``r`` onto ``rg``, comparing head and body as sets."""

    def search(k, s):
        if k == len(r.positive_body):
            g = apply_rule(s, r)
            return set(g.head) == set(rg.head) and set(g.body) == set(rg.body)
        return any(
            t is not None and search(k + 1, t)
            for t in (match_atom(r.positive_body[k], b, s) for b in rg.positive_body)
        )

    return search(0, {})


def test_corpus_inst_soundness_and_simpl_equivalence():
    for c in corpus():
        p, _ = seed_query(c.program, c.query)
        rw = dms_rewrite(p, c.query)
        o = component_ordering(rw.program)
        raw = intelligent_instantiation(rw.program, o, simplify=False)
        for rg in raw.rules:
            assert rg.ground
            assert any(_instance_of(r, rg) for r in rw.program.rules), (c.name, str(rg))
        if len(raw.atoms()) <= 16:
            simplified = intelligent_instantiation(rw.program, o)
            assert stable_models(raw) == stable_models(simplified), c.name

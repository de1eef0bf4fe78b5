import random

import pytest
from hypothesis import given, settings, strategies as st

from frmagic.errors import CapReached, PreconditionViolation, TooLarge
from frmagic.grounder import GroundProgram
from frmagic.parser import parse_atom, parse_program, parse_query, parse_rules
from frmagic.solver import (
    EntailmentMode,
    brute_force_is_stable,
    brute_force_stable_models,
    entails,
    is_model,
    is_stable_model,
    is_unfounded_set,
    killed_atoms,
    magic_atoms_model,
    magic_variant,
    reduct,
    stable_models,
)
from frmagic.syntax import Atom, Literal, Rule
from frmagic.magic import dms_rewrite
from frmagic.analysis import component_ordering
from frmagic.grounder import intelligent_instantiation

from corpus import random_ground_program

EXAMPLE = parse_program("""
lessThan(X,s(X)).
lessThan(X,s(Y)) :- lessThan(X,Y).
greaterThan(s(X),Y) :- not lessThan(X,Y).
""")
QUERY = parse_query("greaterThan(s(s(0)),0)?")


def g(text):
    return GroundProgram.from_rules(parse_rules(text))


def models(text, solve=stable_models):
    return [sorted(map(str, m)) for m in solve(g(text))]


def S(*atoms):
    return frozenset(parse_atom(a) for a in atoms)


def example_ground():
    rw = dms_rewrite(EXAMPLE, QUERY)
    return rw, intelligent_instantiation(rw.program, component_ordering(rw.program))


# -- reduct and models ------------------------------------------------------


def test_reduct_examples():
    p = g("a :- b. b.")
    assert reduct(p, S()).rules == p.rules
    assert reduct(g("a :- not b."), S("b")).rules == ()
    r = reduct(g("greaterThan(s(s(0)),0) :- not lessThan(s(0),0)."), S())
    assert [str(x) for x in r.rules] == ["greaterThan(s(s(0)),0)."]


def test_is_model_examples():
    assert is_model(g("a v b."), S("a"))
    assert is_model(g("a v b."), S("a", "b"))
    assert not is_model(g("a v b."), S())
    assert is_model(g("a :- not b."), S("b"))


def test_stable_model_examples():
    assert models("a v b.") == [["a"], ["b"]]
    assert models("a :- a.") == [[]]
    assert models("a v b. a :- b. b :- a.", brute_force_stable_models) == [["a", "b"]]
    assert models("p(0).", brute_force_stable_models) == [["p(0)"]]
    assert models("a :- not a.", brute_force_stable_models) == []
    assert models("a :- not a.") == []


def test_example_model():
    _, gp = example_ground()
    ms = stable_models(gp)
    assert len(ms) == 1
    assert S("greaterThan(s(s(0)),0)", "magic_greaterThan(s(s(0)),0)", "magic_lessThan(s(0),0)") <= ms[0]


def test_even_loop_and_odd_loop():
    assert models("a :- not b. b :- not a.") == [["a"], ["b"]]
    assert models("a :- not b. b :- not c. c :- not a.") == []


def test_disjunctive_minimality_needs_search():
    text = "a v b. a v c. b v c :- a. c :- b, c."
    assert models(text) == models(text, brute_force_stable_models)


def test_models_sorted_and_cap():
    text = "a v b v c."
    assert models(text) == [["a"], ["b"], ["c"]]
    with pytest.raises(CapReached) as err:
        stable_models(g(text), cap=2)
    assert len(err.value.models) == 2


def test_brute_force_limit():
    rules = [Rule([Atom(f"x{k}")]) for k in range(23)]
    with pytest.raises(TooLarge):
        brute_force_stable_models(GroundProgram(tuple(rules)))


def test_stable_model_check():
    p = g("a v b. c :- a, not b.")
    assert is_stable_model(p, S("a", "c"))
    assert not is_stable_model(p, S("a", "b"))
    assert not is_stable_model(p, S("a"))
    assert brute_force_is_stable(p, S("a", "c"))
    assert not brute_force_is_stable(p, S("a", "b", "c"))


def test_double_head_atoms_are_harmless():
    p = GroundProgram((Rule([parse_atom("a"), parse_atom("a")], [Literal(parse_atom("b"), True)]), Rule([parse_atom("b")])))
    assert [sorted(map(str, m)) for m in stable_models(p)] == [["a", "b"]]


# -- entailment ------------------------------------------------------------


def test_entails_examples():
    _, gp = example_ground()
    for mode in EntailmentMode:
        assert entails(gp, QUERY, mode).answer
    p = g("a v b.")
    q = parse_query("a?")
    brave, cautious = entails(p, q, EntailmentMode.BRAVE), entails(p, q, EntailmentMode.CAUTIOUS)
    assert brave.answer and not cautious.answer
    assert parse_atom("a") in brave.witness and parse_atom("a") not in cautious.witness
    assert brave.model_count == 2


def test_entails_without_models():
    p = g("a :- not a.")
    q = parse_query("a?")
    assert not entails(p, q, EntailmentMode.BRAVE).answer
    report = entails(p, q, EntailmentMode.CAUTIOUS)
    assert report.answer and report.model_count == 0 and report.witness is None


# -- proof objects ---------------------------------------------------------


def test_unfounded_set_examples():
    assert is_unfounded_set(g("a :- b."), S("a"), S())
    assert is_unfounded_set(g("a :- b."), S(), S("a"))
    assert not is_unfounded_set(g("a."), S("a"), S("a"))
    assert is_unfounded_set(g("a :- b. b :- a."), S("a", "b"), S("a", "b"))
    assert is_unfounded_set(g("a v b."), S("a", "b"), S("a"))


def test_unfounded_sets_are_false_in_stable_models():
    # with total interpretations "M extends I" means I = M
    rng = random.Random(7)
    checked = 0
    for _ in range(150):
        p = GroundProgram.from_rules(random_ground_program(rng, max_atoms=6).rules)
        atoms = p.atoms()
        for m in brute_force_stable_models(p):
            for _ in range(8):
                x = frozenset(a for a in atoms if rng.random() < 0.4)
                if is_unfounded_set(p, m, x):
                    checked += 1
                    assert not (m & x)
    assert checked > 50


def test_true_atoms_can_be_unfounded_for_a_smaller_interpretation():
    p = g("a0 :- a1. a1.")
    assert parse_atom("a0") in stable_models(p)[0]
    assert is_unfounded_set(p, S(), S("a0"))


def test_killed_atoms_example():
    _, gp = example_ground()
    m = stable_models(gp)[0]
    killed = killed_atoms(gp, m, m, {"lessThan", "greaterThan"}, universe=[parse_atom("lessThan(s(0),0)")])
    assert killed == S("lessThan(s(0),0)")


def test_killed_atoms_edb_only_when_everything_true():
    p = g("e(0). q(0) :- e(0). magic_q(0).")
    n = S("e(0)", "q(0)", "magic_q(0)")
    killed = killed_atoms(p, n, n, {"e", "q"}, {"e"}, universe=[parse_atom("e(1)")])
    assert killed == S("e(1)")


def test_killed_atoms_empty_interpretation():
    p = g("e.")
    killed = killed_atoms(g("x :- e."), S(), S(), {"e", "x"}, {"e"})
    assert killed == S("e")
    assert killed_atoms(p, S("e"), S("e"), {"e"}, {"e"}) == S()


def test_killed_atoms_preconditions():
    p = g("a.")
    with pytest.raises(PreconditionViolation):
        killed_atoms(p, S(), S("a"), {"a"})
    with pytest.raises(PreconditionViolation):
        killed_atoms(p, S("a"), S(), {"a"})


def test_magic_variant_examples():
    rw, gp = example_ground()
    star = magic_atoms_model(rw)
    assert star == S("magic_greaterThan(s(s(0)),0)", "magic_lessThan(s(0),0)")
    assert magic_variant(frozenset(), EXAMPLE, rw) == star
    i = S("greaterThan(s(s(0)),0)", "lessThan(0,s(0))")
    assert magic_variant(i, EXAMPLE, rw) == star | S("greaterThan(s(s(0)),0)")


def test_magic_variant_seed_only():
    p = parse_program("g(0). e(1).")
    rw = dms_rewrite(p, parse_query("g(0)?"))
    v = magic_variant(S("g(0)"), p, rw)
    assert v == S("g(0)", "e(1)", "magic_g(0)")


# -- oracle agreement ------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_main_solver_matches_oracle(rnd):
    p = GroundProgram.from_rules(random_ground_program(random.Random(rnd.random()), max_atoms=8).rules)
    assert stable_models(p) == brute_force_stable_models(p)


def test_stable_models_are_minimal():
    rng = random.Random(3)
    for _ in range(100):
        p = GroundProgram.from_rules(random_ground_program(rng, max_atoms=7).rules)
        for m in stable_models(p):
            assert brute_force_is_stable(p, m)
            assert is_stable_model(p, m)

"""Automaton mechanics and the LTL translation, oracle-checked."""

import random

import pytest

from ltlplan.buchi import (
    BuchiAutomaton,
    Guard,
    strongly_connected_components,
    translate,
)
from ltlplan.ltl import LassoWord, eval_lasso, parse_formula

from oracles import kosaraju_partition, lasso_eval, random_formula, random_lasso


def test_guard_satisfaction():
    g = Guard(frozenset({"a"}), frozenset({"b"}))
    assert g.satisfied_by(frozenset({"a"}))
    assert g.satisfied_by(frozenset({"a", "c"}))
    assert not g.satisfied_by(frozenset({"a", "b"}))
    assert not g.satisfied_by(frozenset())
    empty = Guard(frozenset(), frozenset())
    assert empty.satisfied_by(frozenset())
    assert empty.satisfied_by(frozenset({"x"}))


def test_guard_clash_rejected():
    with pytest.raises(ValueError):
        Guard(frozenset({"a"}), frozenset({"a"}))


def test_guard_subsumption():
    loose = Guard(frozenset(), frozenset())
    tight = Guard(frozenset({"a"}), frozenset({"b"}))
    assert loose.subsumes(tight)
    assert not tight.subsumes(loose)
    assert tight.subsumes(tight)


def _two_state():
    return BuchiAutomaton(
        num_states=2,
        initial=[0],
        accepting=[1],
        transitions=[
            [(Guard(frozenset(), frozenset()), 0), (Guard(frozenset({"a"}), frozenset()), 1)],
            [(Guard(frozenset({"a"}), frozenset()), 1)],
        ],
        propositions=["a"],
    )


def test_automaton_basics():
    b = _two_state()
    assert b.num_transitions == 3
    assert b.successors(0, frozenset()) == {0}
    assert b.successors(0, frozenset({"a"})) == {0, 1}
    assert b.is_nonblocking(0)
    assert b.accepts_lasso(LassoWord.of([], [["a"]]))
    assert not b.accepts_lasso(LassoWord.of([["a"]], [[]]))


def test_automaton_json_round_trip():
    b = _two_state()
    again = BuchiAutomaton.from_json(b.to_json())
    assert again.to_json() == b.to_json()
    assert again.num_states == b.num_states
    assert sorted(again.initial) == sorted(b.initial)
    assert sorted(again.accepting) == sorted(b.accepting)


def test_tarjan_matches_kosaraju_oracle():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 25)
        adjacency = {v: set() for v in range(n)}
        for _ in range(rng.randint(0, 3 * n)):
            adjacency[rng.randrange(n)].add(rng.randrange(n))
        adjacency = {v: sorted(ts) for v, ts in adjacency.items()}
        mine = frozenset(frozenset(c) for c in strongly_connected_components(adjacency))
        assert mine == kosaraju_partition(adjacency)


def test_translate_simple_formulas():
    b = translate(parse_formula("true"))
    assert b.accepts_lasso(LassoWord.of([], [[]]))
    b = translate(parse_formula("false"))
    assert not b.accepts_lasso(LassoWord.of([], [[]]))
    b = translate(parse_formula("G a"))
    assert b.accepts_lasso(LassoWord.of([], [["a"]]))
    assert not b.accepts_lasso(LassoWord.of([], [["a"], []]))
    b = translate(parse_formula("F a"))
    assert b.accepts_lasso(LassoWord.of([[], []], [["a"], []]))
    assert not b.accepts_lasso(LassoWord.of([["b"]], [[]]))


def test_translate_until_nesting():
    b = translate(parse_formula("a U (b U c)"))
    assert b.accepts_lasso(LassoWord.of([["a"], ["b"]], [["c"]]))
    assert not b.accepts_lasso(LassoWord.of([["a"]], [["b"]]))


def test_translated_states_are_nonblocking_on_some_letter():
    # the translator prunes states that cannot start an infinite run
    for text in ("G (F a && !b)", "a U (b R c)", "G F (a && X b)"):
        b = translate(parse_formula(text))
        for s in range(b.num_states):
            assert b.is_nonblocking(s)


def test_translate_against_eval_corpus():
    rng = random.Random(37)
    names = ["a", "b", "c"]
    corpus = [
        "G (F r1 && (F r2 && (F r3 && F r4)) && !(o1 || o2 || o3 || o4))",
        "G (F r1 && (F r2 && (F r3)) && !o1)",
        "G (F (r1 && F r2))",
    ]
    for text in corpus:
        f = parse_formula(text)
        b = translate(f)
        f_names = sorted({*names, *(a for a in _atom_names(f))})
        for _ in range(60):
            prefix, suffix = random_lasso(rng, f_names)
            word = LassoWord.of(prefix, suffix)
            assert b.accepts_lasso(word) == eval_lasso(f, word), text
    for _ in range(25):
        f = random_formula(rng, rng.randint(1, 10), names)
        b = translate(f)
        for _ in range(40):
            prefix, suffix = random_lasso(rng, names)
            word = LassoWord.of(prefix, suffix)
            expected = lasso_eval(f, prefix, suffix)
            assert b.accepts_lasso(word) == expected, format(f)


def _atom_names(f):
    from ltlplan.ltl import atoms

    return atoms(f)

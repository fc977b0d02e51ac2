import random

import pytest

from helpers import ball, presentation, rules, structure
from hypgrp.errors import InputError, StateError
from hypgrp.fsa import count_by_length
from hypgrp.rewriting import (build_word_acceptor, factor_avoiding_acceptor, free_reduce,
                              kb_complete, parse_presentation, shortlex_less)


def fmt_rules(R):
    P = R.presentation
    return {(P.format(r.lhs), P.format(r.rhs)) for r in R.rules}


def test_parse_g1():
    P = presentation("G1")
    assert P.alphabet.size == 8
    assert len(P.relators) == 1
    assert P.format(P.relators[0]) == "ABabCDcd"
    assert P.alphabet.letters == ("a", "A", "c", "C", "b", "B", "d", "D")


def test_parse_powers_and_groups():
    P = parse_presentation("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: a^2\n"
                           "relator: (ab)^3\n")
    assert [P.format(r) for r in P.relators] == ["aa", "ababab"]


def test_free_group_has_no_relators():
    P = presentation("F2")
    assert P.relators == ()


@pytest.mark.parametrize("text, where", [
    ("hgp v1\ngenerators: a\ninverses: a=A\nrelator: ab\n", "line 4"),
    ("hgp v2\n", "line 1"),
    ("hgp v1\ngenerators: a b\ninverses: a=A b=A\n", "line 3"),
])
def test_parse_errors_name_line(text, where):
    with pytest.raises(InputError, match=where):
        parse_presentation(text)


def test_shortlex_and_free_reduction():
    assert shortlex_less((0,), (0, 0))
    assert shortlex_less((0, 1), (1, 0))
    assert free_reduce((0, 1, 1, 0, 2), {0: 1, 1: 0, 2: 3, 3: 2}) == (2,)
    assert free_reduce((0, 2, 3, 2), {0: 1, 1: 0, 2: 3, 3: 2}) == (0, 2)


def test_free_group_rules():
    R = kb_complete(presentation("F2"))
    assert R.confluent
    assert fmt_rules(R) == {("aA", "e"), ("Aa", "e"), ("bB", "e"), ("Bb", "e")}


def test_z2_rules():
    R = kb_complete(presentation("Z2"))
    assert R.confluent
    assert fmt_rules(R) - {("aA", "e"), ("Aa", "e"), ("bB", "e"), ("Bb", "e")} == {
        ("ba", "ab"), ("bA", "Ab"), ("Ba", "aB"), ("BA", "AB")}


def test_g1_completes_with_its_order():
    R = rules("G1")
    assert R.confluent
    assert len(R) == 16


def test_g2_capped_completion_is_not_confluent():
    R = rules("G2")
    assert not R.confluent
    P = R.presentation
    # a^2 = 1 forces A = a
    assert R.rewrite(P.word("aa")) == ()
    assert R.rewrite(P.word("A")) == P.word("a")
    with pytest.raises(StateError):
        R.reduce(P.word("aa"))


def test_reduce_unique_normal_forms_z2():
    R = kb_complete(presentation("Z2"))
    P = R.presentation
    rng = random.Random(1)
    for _ in range(200):
        w = tuple(rng.randrange(4) for _ in range(rng.randrange(12)))
        v = R.reduce(w)
        a = sum(1 if x == 0 else -1 if x == 1 else 0 for x in w)
        b = sum(1 if x == 2 else -1 if x == 3 else 0 for x in w)
        expect = P.word(("a" * a if a >= 0 else "A" * -a) + ("b" * b if b >= 0 else "B" * -b))
        assert v == expect


def test_reduce_fuzz_relator_insertion():
    # words equal in the group reduce to the same normal form
    for name in ("G1", "Z2"):
        R = rules(name) if name == "G1" else kb_complete(presentation(name))
        P = R.presentation
        inv = P.inverse
        rng = random.Random(7)
        rels = list(P.relators) + [(x, inv[x]) for x in range(P.alphabet.size)]
        for _ in range(200):
            w = tuple(rng.randrange(P.alphabet.size) for _ in range(rng.randrange(15)))
            r = rels[rng.randrange(len(rels))]
            i = rng.randrange(len(w) + 1)
            assert R.reduce(w) == R.reduce(w[:i] + tuple(r) + w[i:])


def test_factor_avoiding_acceptor():
    P = presentation("F2")
    M = factor_avoiding_acceptor(P.alphabet, [P.word("aA"), P.word("ab")])
    assert M.accepts(P.word("ba"))
    assert not M.accepts(P.word("bab"))
    assert not M.accepts(P.word("aAb"))


def test_word_acceptor_needs_confluence():
    with pytest.raises(StateError):
        build_word_acceptor(rules("G2"))


def test_word_acceptor_free_group():
    W = build_word_acceptor(kb_complete(presentation("F2")))
    assert W.n_states == 5
    assert count_by_length(W, 3) == [1, 4, 12, 36]


def test_word_acceptor_matches_ball_g1():
    # accepted words of each length are the spheres of the Cayley graph
    W = build_word_acceptor(rules("G1"))
    B = ball("G1", 5)
    sizes = [int((B.lengths == n).sum()) for n in range(6)]
    assert count_by_length(W, 5) == sizes
    assert W.n_states == structure("G1").W.n_states

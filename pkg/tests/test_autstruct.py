import random

import pytest

from helpers import ball, presentation, structure
from hypgrp.autstruct import (WordDifferenceSet, build_structure, build_wd_machine,
                              prefix_differences)
from hypgrp.fsa import words_up_to
from hypgrp.rewriting import kb_complete


def test_difference_set_keeps_insertion_order():
    D = WordDifferenceSet([(), (0,), (1, 2)])
    D.add((0,))
    assert list(D) == [(), (0,), (1, 2)]
    assert D.index((1, 2)) == 2
    assert D.max_length == 2
    assert (3,) not in D


def test_prefix_differences_z2():
    S = structure("Z2")
    P = S.presentation
    u, v = P.word("ba"), P.word("ab")
    ds = prefix_differences(u, v, S.reduce, P.inverse, P.alphabet.size)
    assert [P.format(d) for d in ds] == ["e", "aB", "e"]


@pytest.mark.parametrize("name, w_states, wd1, gamma", [
    ("F2", 5, 5, 1),
    ("Z", 3, 3, 1),
    ("Zab", 3, 3, 1),
    ("G1", 25, 33, 4),
    ("G2", 52, 30, 7),
])
def test_structure_sizes(name, w_states, wd1, gamma):
    S = structure(name)
    assert S.W.n_states == w_states
    assert S.WD1.n_states == wd1
    assert S.gamma == gamma


def test_structure_from_confluent_rules_matches_z2():
    S = build_structure(kb_complete(presentation("Z2")))
    P = S.presentation
    assert S.reduce(P.word("baBA")) == ()
    assert S.reduce(P.word("bbaa")) == P.word("aabb")


def test_g2_reduce_relators():
    S = structure("G2")
    P = S.presentation
    assert S.reduce(P.word("aa")) == ()
    assert S.reduce(P.word("bbb")) == ()
    assert S.reduce(P.word("ab" * 7)) == ()
    assert S.W.accepts(S.reduce(P.word("ab")))


@pytest.mark.parametrize("name", ["G1", "G2"])
def test_word_acceptor_matches_oracle_normal_forms(name):
    S = structure(name)
    B = ball(name, 5)
    assert set(words_up_to(S.W, 5)) == set(B.words)


@pytest.mark.parametrize("name", ["G1", "G2"])
def test_multipliers_against_oracle(name):
    S = structure(name)
    B = ball(name, 5)
    k = S.alphabet.size
    rng = random.Random(3)
    inner = [w for w in B.words if len(w) <= 4]
    for u in rng.sample(inner, min(60, len(inner))):
        for x in range(k):
            v = B.reduce(u + (x,))
            assert S.multipliers[x].accepts((u, v))
            other = B.words[rng.randrange(len(B.words))]
            if other != v:
                assert not S.multipliers[x].accepts((u, other))
        assert S.multipliers[None].accepts((u, u))


@pytest.mark.parametrize("name", ["G1", "G2"])
def test_reduce_fuzz(name):
    S = structure(name)
    P = S.presentation
    inv = P.inverse
    rels = list(P.relators) + [(x, inv[x]) for x in range(P.alphabet.size)]
    rng = random.Random(11)
    for _ in range(100):
        w = tuple(rng.randrange(P.alphabet.size) for _ in range(rng.randrange(25)))
        r = rels[rng.randrange(len(rels))]
        i = rng.randrange(len(w) + 1)
        nf = S.reduce(w)
        assert S.W.accepts(nf)
        assert S.reduce(w[:i] + tuple(r) + w[i:]) == nf


def test_wd_machine_accepts_equal_pairs():
    S = structure("G1")
    WD = build_wd_machine(S.D_M, S)
    P = S.presentation
    # two short-lex forms are related exactly when they are equal
    u = S.reduce(P.word("abAB"))
    assert WD.machine.accepts((u, u))
    assert WD.n_states == 33

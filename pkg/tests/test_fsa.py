import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrp.errors import InputError, ResourceLimitError
from hypgrp.fsa import (NFA, Alphabet, Automaton, PairAlphabet, all_words, as_nfa, canonical,
                        compose, converse, count_by_length, determinize, diff_witnesses,
                        equivalent, intersect, minimize, pair_product, project,
                        reverse_with_subsets, shortlex_key, words_up_to)

AB = Alphabet(("a", "b"))
Z = Alphabet(("a", "A"))


def z_geodesics():
    # {a^n} u {A^n}
    return Automaton(Z, 1, [[1, 2], [1, -1], [-1, 2]], [True, True, True])


@st.composite
def automata(draw, k=2, max_states=6):
    n = draw(st.integers(1, max_states))
    delta = draw(st.lists(st.lists(st.integers(-1, n - 1), min_size=k, max_size=k),
                          min_size=n, max_size=n))
    acc = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return Automaton(Alphabet(tuple("ab"[:k])), 1, delta, acc, 0)


@st.composite
def nfas(draw, k=2, max_states=5):
    n = draw(st.integers(1, max_states))
    edges = []
    for _ in range(n):
        e = {}
        for lab in range(k):
            targets = draw(st.lists(st.integers(0, n - 1), max_size=2, unique=True))
            if targets:
                e[lab] = targets
        edges.append(e)
    eps = [draw(st.lists(st.integers(0, n - 1), max_size=1)) for _ in range(n)]
    initial = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True))
    acc = draw(st.lists(st.integers(0, n - 1), max_size=n, unique=True))
    return NFA(Alphabet(tuple("ab"[:k])), 1, n, initial, acc, edges, eps)


def language(M, n=5):
    k = M.alphabet.size
    return {w for w in all_words(k, n) if M.accepts(w)}


def test_run_z_geodesics():
    M = z_geodesics()
    assert M.accepts("aa")
    assert not M.accepts("aA")
    assert M.accepts("")


def test_run_rejects_unknown_symbol():
    with pytest.raises(InputError):
        z_geodesics().accepts((5,))


def test_pair_alphabet_has_no_double_pad():
    P = PairAlphabet(AB)
    assert P.size == 8
    assert (2, 2) not in P.pairs()
    with pytest.raises(InputError):
        P.parse_label("_,_")
    assert P.format_label(P.parse_label("a,_")) == "a,_"


def test_pair_encoding_pads_shorter_word():
    P = PairAlphabet(AB)
    labels = P.encode((0, 1, 1), (1,))
    assert [P.split(x) for x in labels] == [(0, 1), (1, 2), (1, 2)]
    assert P.decode(labels) == ((0, 1, 1), (1,))


def test_canonical_numbering_is_breadth_first():
    M = Automaton(AB, 1, [[-1, -1], [2, 0], [1, -1]], [True, False, False], initial=1)
    C = canonical(M)
    assert C.initial == 0
    assert C.n_states == 3
    assert C.delta.tolist() == [[1, 2], [0, -1], [-1, -1]]


def test_minimize_merges_equivalent_states():
    # a* with two redundant copies of the loop
    M = Automaton(AB, 1, [[1, -1], [2, -1], [1, -1]], [True, True, True])
    assert minimize(M).n_states == 1


def test_determinize_cap():
    # (a|b)* a (a|b)^4 needs 32 subsets
    n = 6
    edges = [{0: [0, 1], 1: [0]}] + [{0: [i + 1], 1: [i + 1]} for i in range(1, n - 1)] + [{}]
    N = NFA(AB, 1, n, [0], [n - 1], edges)
    assert determinize(N).n_states == 32
    with pytest.raises(ResourceLimitError) as err:
        determinize(N, max_states=10)
    assert err.value.stats


def test_intersect_and_pair_product():
    W = z_geodesics()
    assert equivalent(intersect(W, W), W)
    P = pair_product(W, W)
    assert P.accepts(("aa", "A"))
    assert not P.accepts(("aA", "a"))


def test_converse_and_compose():
    W = z_geodesics()
    P = pair_product(W, W)
    assert equivalent(converse(P), P)
    eq = Automaton(Z, 2, [[0, -1, -1, -1, 0, -1, -1, -1]], [True])
    assert equivalent(compose(eq, eq), eq)


def test_count_and_words():
    W = z_geodesics()
    assert count_by_length(W, 3) == [1, 2, 2, 2]
    assert words_up_to(W, 2) == [(), (0,), (1,), (0, 0), (1, 1)]


@settings(max_examples=100, deadline=None)
@given(automata())
def test_minimize_idempotent(M):
    m = minimize(M)
    assert minimize(m).identical(m)
    assert language(m) == language(M)


@settings(max_examples=100, deadline=None)
@given(automata(), automata())
def test_minimal_automata_unique(M1, M2):
    # equal languages give identical canonical minimal automata
    if language(M1, 6) == language(M2, 6) and equivalent(M1, M2):
        assert minimize(M1).identical(minimize(M2))


@settings(max_examples=100, deadline=None)
@given(nfas())
def test_determinize_preserves_language(N):
    D = determinize(N)
    for w in all_words(2, 5):
        assert D.accepts(w) == N.accepts(w)


@settings(max_examples=200, deadline=None)
@given(automata(max_states=5))
def test_reversal_subset_property(M):
    M = canonical(M)
    R = reverse_with_subsets(M)
    if not M.accepting.any():
        return
    for v in all_words(2, 3):
        tau = M.state_after(v)
        if tau < 0:
            continue
        for w in all_words(2, 3):
            T = R.state_after(w)
            inside = T >= 0 and tau in R.payloads[T]
            assert inside == M.accepts(tuple(v) + tuple(reversed(w)))


@settings(max_examples=100, deadline=None)
@given(automata(max_states=4), automata(max_states=4))
def test_projection_of_pair_product(W1, W2):
    P = pair_product(W1, W2)
    left = determinize(project(P, 1))
    right = determinize(project(P, 2))
    if language(W2, 6):
        assert language(left, 5) == language(W1, 5)
    if language(W1, 6):
        assert language(right, 5) == language(W2, 5)


@settings(max_examples=100, deadline=None)
@given(automata(), automata())
def test_diff_witnesses_ordered(M1, M2):
    wit = diff_witnesses(M1, M2, cap=20)
    keys = [shortlex_key(w) for w in wit]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for w in wit:
        assert M1.accepts(w) and not M2.accepts(w)
    if not wit:
        assert all(M2.accepts(w) for w in language(M1))
    else:
        # the first witness is the least word of the difference
        diff = [w for w in all_words(2, len(wit[0])) if M1.accepts(w) and not M2.accepts(w)]
        assert shortlex_key(diff[0]) == keys[0]


def test_as_nfa_round_trip():
    W = z_geodesics()
    assert equivalent(determinize(as_nfa(W)), W)
    assert np.array_equal(minimize(W).accepting, minimize(determinize(as_nfa(W))).accepting)

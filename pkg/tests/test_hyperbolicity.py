import pytest

from helpers import ball, geodesic_words, structure, verified
from hypgrp.fsa import words_up_to
from hypgrp.hyperbolicity import (bigon_closure, build_GE, build_GW, find_T_counterexamples,
                                  verify_hyperbolic)
from hypgrp.autstruct import WordDifferenceSet, build_wd_machine


@pytest.mark.parametrize("name, gw", [("F2", 5), ("Z", 3), ("Zab", 3)])
def test_trivial_groups_halt_at_once(name, gw):
    rep = verified(name)
    assert rep.halted and rep.n_final == 1
    assert rep.GW_final.n_states == gw


def test_free_group_bigons_are_trivial():
    rep = verified("F2")
    bigon_closure(rep, structure("F2"))
    assert rep.papasoglu_vertex == 0


def test_g1_round_counts():
    rep = verified("G1")
    r = rep.rounds[0]
    assert (r.wd_states, r.ge_raw, r.ge_min, r.gw_raw, r.gw_min) == (33, 121, 49, 49, 49)
    assert r.t_states == 265
    assert rep.halted and rep.n_final == 1
    assert rep.gamma_prime == 4


def test_g2_needs_a_second_round():
    rep = verified("G2")
    assert rep.rounds[0].counterexamples > 0
    assert rep.halted and rep.n_final == 2
    assert rep.GW_final.n_states == 54


@pytest.mark.parametrize("name, radius", [("G1", 4), ("G2", 6)])
def test_gw_accepts_exactly_geodesics(name, radius):
    rep = verified(name)
    B = ball(name, radius)
    assert set(words_up_to(rep.GW_final, radius)) == geodesic_words(B, radius)


def test_counterexamples_are_geodesic():
    S = structure("G2")
    WD = build_wd_machine(WordDifferenceSet(S.D_M), S)
    GW = build_GW(build_GE(WD, S.W))
    cex = find_T_counterexamples(WD, GW, cap=50)
    assert cex
    for w in cex:
        assert len(S.reduce(w)) == len(w)
        assert not GW.accepts(w)


def test_z2_does_not_halt():
    rep = verify_hyperbolic(structure("Z2"), max_iter=5)
    assert not rep.halted
    sizes = [r.wd_states for r in rep.rounds]
    assert len(sizes) == 5
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_g1_bigon_constants_bound_oracle():
    from hypgrp.oracle import max_bigon_width
    rep = verified("G1")
    bigon_closure(rep, structure("G1"))
    assert rep.papasoglu_vertex <= rep.gamma_prime
    width, _ = max_bigon_width(ball("G1", 4))
    assert width <= rep.papasoglu_vertex

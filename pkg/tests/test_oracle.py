import itertools

import pytest

from helpers import ball, presentation
from hypgrp.errors import InputError, ResourceLimitError
from hypgrp.oracle import (build_ball, geodesics_between, max_bigon_width,
                           max_triangle_thinness, oracle_system)


def fmt(P, words):
    return sorted(P.format(w) for w in words)


def test_ball_sizes():
    assert len(ball("F2", 2)) == 17
    assert len(ball("Z", 3)) == 7
    assert len(ball("Z2", 3)) == 25


def test_ball_vertex_cap():
    P = presentation("F2")
    with pytest.raises(ResourceLimitError):
        build_ball(oracle_system(P, 4), 4, max_vertices=100)


@pytest.mark.parametrize("name", ["F2", "Z2", "G1", "G2"])
def test_relators_close_up(name):
    assert ball(name, 4).relator_failures() == 0


def test_geodesics_free_group():
    B = ball("F2", 4)
    P = B.presentation
    assert fmt(P, geodesics_between(B, (), P.word("ab"))) == ["ab"]


def test_geodesics_z2():
    B = ball("Z2", 4)
    P = B.presentation
    assert fmt(P, geodesics_between(B, (), P.word("ab"))) == ["ab", "ba"]
    assert len(geodesics_between(ball("Z2", 8), P.word("a"), P.word("aab"))) == 2
    assert len(geodesics_between(ball("Z2", 8), (), P.word("aabb"))) == 6


def test_geodesics_must_stay_inside():
    B = ball("Z2", 3)
    P = B.presentation
    with pytest.raises(InputError):
        geodesics_between(B, P.word("aa"), P.word("BB"))


@pytest.mark.parametrize("name", ["Z2", "G1"])
def test_metric_axioms(name):
    B = ball(name, 3)
    idx = range(0, len(B), max(1, len(B) // 25))
    for i, j in itertools.product(idx, idx):
        d = B.distance(i, j)
        assert d == B.distance(j, i)
        assert (d == 0) == (i == j)
        assert d <= B.lengths[i] + B.lengths[j]
    for i, j, k in itertools.product(list(idx)[:10], repeat=3):
        assert B.distance(i, k) <= B.distance(i, j) + B.distance(j, k)


def test_adjacency_is_symmetric():
    B = ball("G1", 3)
    inv = B.presentation.inverse
    for g in range(len(B)):
        for x, h in enumerate(B.adjacency[g]):
            if h >= 0:
                assert B.adjacency[h, inv[x]] == g


def test_bigon_width():
    assert max_bigon_width(ball("F2", 3))[0] == 0
    width, _ = max_bigon_width(ball("Z2", 4))
    assert width == 4


def test_triangles_in_free_group_are_tripods():
    delta, _ = max_triangle_thinness(ball("F2", 4))
    assert delta == 0

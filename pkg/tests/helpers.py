"""Cached builders shared by the test modules (structures take seconds to build)."""

from functools import lru_cache

from hypgrp.autstruct import build_structure
from hypgrp.hyperbolicity import verify_hyperbolic
from hypgrp.oracle import build_ball, oracle_system
from hypgrp.pipeline import PipelineConfig, run_kb
from hypgrp.rewriting import load_example


@lru_cache(maxsize=None)
def presentation(name):
    return load_example(name)


@lru_cache(maxsize=None)
def rules(name):
    R, _, _ = run_kb(presentation(name), PipelineConfig(input=name))
    return R


@lru_cache(maxsize=None)
def structure(name):
    return build_structure(rules(name))


@lru_cache(maxsize=None)
def verified(name):
    return verify_hyperbolic(structure(name))


@lru_cache(maxsize=None)
def ball(name, radius):
    P = presentation(name)
    return build_ball(oracle_system(P, radius), radius)


@lru_cache(maxsize=None)
def thin(name, samples=10000):
    from hypgrp.thinness import ThinnessParams, compute_thinness
    rep = verified(name)
    return compute_thinness(structure(name), ThinnessParams(samples=samples),
                            gamma_prime=rep.gamma_prime)


def geodesic_words(B, max_len):
    """Every geodesic word of length <= max_len, read off the ball's distance layers."""
    out = []
    stack = [((), 0)]
    k = B.adjacency.shape[1]
    while stack:
        w, g = stack.pop()
        out.append(w)
        if len(w) == max_len:
            continue
        for x in range(k):
            h = int(B.adjacency[g, x])
            if h >= 0 and B.lengths[h] == len(w) + 1:
                stack.append((w + (x,), h))
    return set(out)

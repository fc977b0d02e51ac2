"""A short-lex triangle in the (2,3,7) triangle group that is wider than 8.

Each side is checked to be geodesic with the group's own word problem, and
the companion points at distance 8 from the corner ``a`` are compared.
"""

from hypgrp.autstruct import build_structure
from hypgrp.pipeline import PipelineConfig, run_kb
from hypgrp.rewriting import load_example
from hypgrp.thinness import meeting_parameters

U = "BababaBabaBababaBabaBabaBaBabaBaBa"
V = "BaBabaBaBabaBaBa"
W = "BaBabaBaBabaBaBababaBaBabaBabaBaBab"


def main():
    P = load_example("G2")
    S = build_structure(run_kb(P, PipelineConfig(input="G2"))[0])
    u, v, w = P.word(U), P.word(V), P.word(W)
    print("closes up:", S.reduce(w + u + v) == ())
    for name, side in (("u", u), ("v", v), ("w", w)):
        nf = S.reduce(side)
        print(f"{name}: length {len(side)}, normal form {nf == side}")
    ra = meeting_parameters(len(u), len(v), len(w))[0]
    print("rho at a:", ra)
    t = 8
    gap = S.reduce(S.inv(w[:t]) + S.inv(v[len(v) - t:]))
    print(f"companions at distance {t} from a are {len(gap)} apart: {P.format(gap)}")


if __name__ == "__main__":
    main()

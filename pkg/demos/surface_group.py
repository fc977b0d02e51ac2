"""Walk the genus-two surface group through every stage.

Run with ``python demos/surface_group.py``; takes about a minute.
"""

from hypgrp.autstruct import build_structure
from hypgrp.hyperbolicity import bigon_closure, verify_hyperbolic
from hypgrp.pipeline import PipelineConfig, run_kb
from hypgrp.rewriting import load_example
from hypgrp.thinness import ThinnessParams, compute_thinness


def main():
    P = load_example("G1")
    print("letters:", " ".join(P.alphabet.letters))
    print("relator:", P.format(P.relators[0]))

    R, _, _ = run_kb(P, PipelineConfig(input="G1"))
    print(f"completion: {len(R)} rules, confluent={R.confluent}")

    S = build_structure(R)
    print(f"word acceptor {S.W.n_states} states, WD1 {S.WD1.n_states}, gamma {S.gamma}")
    w = P.word("abABcdCDab")
    print("normal form of abABcdCDab:", P.format(S.reduce(w)) or "e")

    rep = verify_hyperbolic(S)
    bigon_closure(rep, S)
    print(f"hyperbolic after {rep.n_final} round(s): GW {rep.GW_final.n_states} states, "
          f"gamma' {rep.gamma_prime}, bigon constant {rep.papasoglu_vertex}")

    t = compute_thinness(S, ThinnessParams(), gamma_prime=rep.gamma_prime)
    print(f"triangle differences {t.d_total}, FRD {t.frd_states}, GP {t.gp_states_after_min}")
    print(f"short-lex triangles are {t.delta_raw}-thin; all geodesic triangles "
          f"{t.general_bound}-thin")


if __name__ == "__main__":
    main()

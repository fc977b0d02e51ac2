"""Z^2 is automatic but not hyperbolic: the verifier keeps finding new differences."""

from hypgrp.autstruct import build_structure
from hypgrp.hyperbolicity import verify_hyperbolic
from hypgrp.rewriting import kb_complete, load_example


def main():
    S = build_structure(kb_complete(load_example("Z2")))
    rep = verify_hyperbolic(S, max_iter=6, log=print)
    print("halted:", rep.halted)
    print("difference machine sizes:", [r.wd_states for r in rep.rounds])


if __name__ == "__main__":
    main()

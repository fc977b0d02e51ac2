"""Command line interface: ``hypgrp <subcommand> ...``.

Exit status 0 means success (or a halted verification), 2 an inconclusive
run that stopped at a cap, 1 an error.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import HypGrpError, InputError, ResourceLimitError
from .fsa import determinize, diff_witnesses, minimize, shortlex_key, words_up_to
from .io import format_fsa, format_report, load_fsa
from .oracle import build_ball, max_bigon_width, max_triangle_thinness, oracle_system
from .pipeline import (STAGES, PipelineConfig, run_autstruct, run_kb, run_pipeline,
                       run_thinness, run_verify)
from .rewriting import load_presentation

OK, ERROR, INCONCLUSIVE = 0, 1, 2


def _emit(args, files, report_name):
    """Write ``files`` under ``--out`` if given; print the report unless quiet."""
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text)
    if not args.quiet and report_name in files:
        sys.stdout.write(files[report_name])


def _log(args):
    if args.quiet:
        return None
    return lambda m: print(m, file=sys.stderr)


def _config(args):
    return PipelineConfig(
        input=args.file, out=getattr(args, "out", None), force=getattr(args, "force", False),
        quiet=args.quiet, max_rules=args.max_rules, max_rule_len=args.max_rule_len,
        max_iter=getattr(args, "max_iter", 20), cex_cap=getattr(args, "cex_cap", 500),
        samples=getattr(args, "samples", 10000), sample_len=getattr(args, "sample_len", 50),
        seed=getattr(args, "seed", 0), max_rounds=getattr(args, "max_rounds", 20),
        thin_cex_cap=getattr(args, "thin_cex_cap", 500),
        mem_cap_gib=getattr(args, "mem_cap_gib", 4.5),
        timings=getattr(args, "timings", False))


def cmd_kb(args):
    cfg = _config(args)
    P = load_presentation(args.file)
    R, files, summary = run_kb(P, cfg)
    files["kb_report.txt"] = format_report(summary)
    _emit(args, files, "kb_report.txt")
    return OK


def _structure(args):
    cfg = _config(args)
    P = load_presentation(args.file)
    R, _, _ = run_kb(P, cfg)
    S, files, summary = run_autstruct(R)
    return cfg, S, files


def cmd_autstruct(args):
    _, _, files = _structure(args)
    _emit(args, files, "structure.txt")
    return OK


def cmd_verify(args):
    cfg, S, _ = _structure(args)
    rep, files, _ = run_verify(S, cfg, log=_log(args))
    _emit(args, files, "verify_report.txt")
    return OK if rep.halted else INCONCLUSIVE


def cmd_thinness(args):
    cfg, S, _ = _structure(args)
    vrep, _, _ = run_verify(S, cfg, log=_log(args))
    if not vrep.halted:
        print("verification did not halt; thinness needs a hyperbolic structure",
              file=sys.stderr)
        return INCONCLUSIVE
    rep, files, _ = run_thinness(S, cfg, vrep.gamma_prime, log=_log(args))
    _emit(args, files, "thinness_report.txt")
    return OK if rep.completed else INCONCLUSIVE


def cmd_oracle(args):
    P = load_presentation(args.file)
    R = oracle_system(P, args.radius)
    ball = build_ball(R, args.radius)
    sizes = [0] * (args.radius + 1)
    for n in ball.lengths:
        sizes[int(n)] += 1
    items = {"radius": args.radius, "vertices": len(ball), "sphere_sizes": sizes,
             "relator_failures": ball.relator_failures()}
    files = {}
    if args.bigons:
        width, h = max_bigon_width(ball)
        items["max_bigon_width"] = width
        items["bigon_endpoint"] = P.format(h)
    if args.triangles:
        delta, T = max_triangle_thinness(ball, shortlex_only=args.shortlex_only)
        items["triangles"] = "shortlex" if args.shortlex_only else "geodesic"
        items["max_triangle_thinness"] = delta
        files["witness_triangle.txt"] = format_report({
            "a": P.format(T.a), "b": P.format(T.b), "c": P.format(T.c),
            "u": P.format(T.u), "v": P.format(T.v), "w": P.format(T.w),
            "rho": [str(r) for r in T.rho], "corner": T.corner, "position": T.position,
            "companion_distance": T.companion_max})
    files["oracle_report.txt"] = format_report(items)
    _emit(args, files, "oracle_report.txt")
    return OK


def cmd_fsa(args):
    if args.action == "eq":
        A, B = load_fsa(args.files[0]), load_fsa(args.files[1])
        if A.arity != B.arity or A.alphabet != B.alphabet:
            raise InputError("automata have different alphabets or arities")
        mA, mB = minimize(A), minimize(B)
        wit = [(w, "<") for w in diff_witnesses(mA, mB, cap=args.witnesses)]
        wit += [(w, ">") for w in diff_witnesses(mB, mA, cap=args.witnesses)]
        if not wit:
            if not args.quiet:
                print("equal")
            return OK
        if not args.quiet:
            # '<' only in the first file, '>' only in the second
            for w, side in sorted(wit, key=lambda p: shortlex_key(p[0]))[:args.witnesses]:
                print(side, _show(A, w))
        return INCONCLUSIVE
    M = load_fsa(args.files[0])
    if args.action == "min":
        text = format_fsa(minimize(M))
        if args.out:
            Path(args.out).write_text(text)
        elif not args.quiet:
            sys.stdout.write(text)
    elif args.action == "info":
        sys.stdout.write(format_report({
            "arity": M.arity, "alphabet": list(M.alphabet.letters), "states": M.n_states,
            "accepting": int(M.accepting.sum()), "minimal_states": minimize(M).n_states}))
    elif args.action == "words":
        for w in sorted(words_up_to(M, args.max_len), key=shortlex_key):
            print(_show(M, w))
    elif args.action == "run":
        word = args.files[1] if len(args.files) > 1 else ""
        ok = M.accepts(tuple(word.split(",")) if M.arity == 2 else word)
        print("accepted" if ok else "rejected")
        return OK if ok else INCONCLUSIVE
    return OK


def _show(M, w):
    if M.arity == 1:
        return M.alphabet.format(w) or "e"
    u, v = w
    return f"({M.alphabet.format(u) or 'e'}, {M.alphabet.format(v) or 'e'})"


def cmd_pipeline(args):
    cfg = _config(args)
    cfg.stages = tuple(s.strip() for s in args.stages.split(","))
    bad = [s for s in cfg.stages if s not in STAGES]
    if bad:
        raise InputError(f"unknown stage(s): {', '.join(bad)}")
    status, _ = run_pipeline(cfg, log=lambda m: print(m, file=sys.stderr))
    return status


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (a file for 'fsa min')")
    common.add_argument("--force", action="store_true", help="rerun completed stages")
    common.add_argument("--quiet", action="store_true")

    kb = argparse.ArgumentParser(add_help=False)
    kb.add_argument("--max-rules", type=int, default=5000)
    kb.add_argument("--max-rule-len", type=int, default=None,
                    help="longest rule kept by completion (default: longest relator + 4)")

    verify = argparse.ArgumentParser(add_help=False)
    verify.add_argument("--max-iter", type=int, default=20)
    verify.add_argument("--cex-cap", type=int, default=500)

    thin = argparse.ArgumentParser(add_help=False)
    thin.add_argument("--samples", type=int, default=10000)
    thin.add_argument("--sample-len", type=int, default=50)
    thin.add_argument("--seed", type=int, default=0)
    thin.add_argument("--max-rounds", type=int, default=20)
    thin.add_argument("--thin-cex-cap", type=int, default=500,
                      help="GP witnesses used per round")
    thin.add_argument("--mem-cap-gib", type=float, default=4.5,
                      help="resident memory limit for the thinness automata")

    p = argparse.ArgumentParser(prog="hypgrp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hypgrp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kb", parents=[common, kb], help="capped Knuth-Bendix completion")
    s.add_argument("file")
    s.set_defaults(func=cmd_kb)

    s = sub.add_parser("autstruct", parents=[common, kb], help="short-lex automatic structure")
    s.add_argument("file")
    s.set_defaults(func=cmd_autstruct)

    s = sub.add_parser("verify", parents=[common, kb, verify],
                       help="prove hyperbolicity and build the geodesic acceptor")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("thinness", parents=[common, kb, verify, thin],
                       help="thinness constant of short-lex triangles")
    s.add_argument("file")
    s.set_defaults(func=cmd_thinness)

    s = sub.add_parser("oracle", parents=[common], help="brute force on a Cayley ball")
    s.add_argument("file")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--bigons", action="store_true")
    s.add_argument("--triangles", action="store_true")
    s.add_argument("--shortlex-only", action="store_true")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("fsa", parents=[common], help="automaton utilities")
    s.add_argument("action", choices=["eq", "min", "info", "words", "run"])
    s.add_argument("files", nargs="+")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--witnesses", type=int, default=5)
    s.set_defaults(func=cmd_fsa)

    s = sub.add_parser("pipeline", parents=[common, kb, verify, thin],
                       help="kb, autstruct, verify and thinness with saved artifacts")
    s.add_argument("file")
    s.add_argument("--stages", default=",".join(STAGES))
    s.add_argument("--timings", action="store_true", help="record stage times in the manifest")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fsa" and args.action == "eq" and len(args.files) != 2:
        parser.error("fsa eq needs two files")
    if args.command == "pipeline" and not args.out:
        parser.error("pipeline needs --out")
    try:
        return args.func(args)
    except ResourceLimitError as e:
        print(f"hypgrp: {e}", file=sys.stderr)
        return INCONCLUSIVE
    except (HypGrpError, OSError) as e:
        print(f"hypgrp: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

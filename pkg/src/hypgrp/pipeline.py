"""Stage runners and the resumable ``kb -> autstruct -> verify -> thinness`` pipeline.

Every stage writes plain-text artifacts into the output directory and
records itself in ``manifest.txt``.  Nothing time-dependent is written
unless ``timings`` is set, so reruns with the same configuration give
byte-identical directories.
"""

import hashlib
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .autstruct import build_structure, build_wd_machine
from .errors import InputError
from .hyperbolicity import bigon_closure, verify_hyperbolic
from .io import (format_fsa, format_report, format_rules, load_report, parse_report,
                 parse_rules)
from .rewriting import kb_complete, load_presentation, resolve_input
from .thinness import ThinnessParams, compute_thinness

STAGES = ("kb", "autstruct", "verify", "thinness")

HALTED, INCONCLUSIVE = 0, 2


@dataclass
class PipelineConfig:
    input: str
    out: str = None
    stages: tuple = STAGES
    force: bool = False
    quiet: bool = False
    timings: bool = False
    # kb
    max_rules: int = 5000
    max_rule_len: int = None  # default: longest relator + 4
    # verify
    max_iter: int = 20
    cex_cap: int = 500
    # thinness
    samples: int = 10000
    sample_len: int = 50
    seed: int = 0
    max_rounds: int = 20
    thin_cex_cap: int = 500
    mem_cap_gib: float = 4.5

    def stage_config(self, stage):
        """The settings a stage depends on, including those of earlier stages."""
        keys = {"kb": ("max_rules", "max_rule_len"),
                "autstruct": (),
                "verify": ("max_iter", "cex_cap"),
                "thinness": ("samples", "sample_len", "seed", "max_rounds", "thin_cex_cap",
                             "mem_cap_gib")}
        d = asdict(self)
        out = {}
        for s in STAGES[:STAGES.index(stage) + 1]:
            for k in keys[s]:
                out[k] = d[k]
        return out

    def thinness_params(self):
        return ThinnessParams(samples=self.samples, sample_len=self.sample_len, seed=self.seed,
                              max_rounds=self.max_rounds, cex_cap=self.thin_cex_cap,
                              mem_cap_gib=self.mem_cap_gib)


def _digest(*parts):
    h = hashlib.sha256()
    for p in parts:
        h.update(repr(p).encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# stages; each returns (result, {file name: text}, summary dict)


def run_kb(P, cfg):
    longest = max((len(r) for r in P.relators), default=2)
    cap = cfg.max_rule_len if cfg.max_rule_len is not None else longest + 4
    R = kb_complete(P, max_rules=cfg.max_rules, max_rule_len=cap)
    summary = {"rules": len(R), "confluent": R.confluent, "max_rule_len": cap,
               "cap_hit": bool(R.stats.get("stopped"))}
    return R, {"rules.txt": format_rules(R)}, summary


def multiplier_file(S, x):
    return "M_eq.fsa" if x is None else f"M_{x + 1}.fsa"


def run_autstruct(R):
    S = build_structure(R)
    P = S.presentation
    files = {"W.fsa": format_fsa(S.W), "WD1.fsa": format_fsa(S.WD1.machine)}
    items = {"gamma": S.gamma, "W_states": S.W.n_states, "WD1_states": S.WD1.n_states,
             "D_M": len(S.D_M), "differences": len(S.differences),
             "iterations": S.stats.get("iterations"), "W_file": "W.fsa", "WD1_file": "WD1.fsa"}
    for x in [None] + list(range(P.alphabet.size)):
        name = multiplier_file(S, x)
        files[name] = format_fsa(S.multipliers[x])
        label = "eq" if x is None else P.alphabet.letters[x]
        items[f"multiplier.{label}"] = f"{name} {S.multipliers[x].n_states}"
    files["structure.txt"] = format_report(items)
    summary = {"gamma": S.gamma, "W_states": S.W.n_states, "WD1_states": S.WD1.n_states}
    return S, files, summary


def run_verify(S, cfg, log=None):
    rep = verify_hyperbolic(S, max_iter=cfg.max_iter, cex_cap=cfg.cex_cap, log=log)
    if rep.halted:
        bigon_closure(rep, S)
    items = {"halted": rep.halted, "n_final": rep.n_final, "gamma": rep.gamma,
             "gamma_prime": rep.gamma_prime, "gamma_prime_closure": rep.gamma_prime_closure,
             "papasoglu_vertex": rep.papasoglu_vertex,
             "papasoglu_midedge": rep.papasoglu_midedge,
             "GW_states": rep.GW_final.n_states, "WD_states": len(rep.WD_final)}
    for r in rep.rounds:
        items[f"round.{r.n}"] = (f"wd={r.wd_states} ge={r.ge_raw}->{r.ge_min} "
                                 f"gw={r.gw_raw}->{r.gw_min} t={r.t_states} "
                                 f"counterexamples={r.counterexamples}")
    files = {"GW.fsa": format_fsa(rep.GW_final),
             "WD.fsa": format_fsa(build_wd_machine(rep.WD_final, S).machine),
             "verify_report.txt": format_report(items)}
    return rep, files, items


def thinness_items(rep, timings=False):
    items = {"completed": rep.completed, "delta_raw": rep.delta_raw,
             "delta_plus_one": rep.delta_plus_one, "d1_size": rep.d1_size,
             "d2_size": rep.d2_size, "d_total": rep.d_total, "frd_states": rep.frd_states,
             "accept_triples": rep.accept_triples, "ngp_states": rep.ngp_states,
             "gp_states": f"{rep.gp_states_before_min}->{rep.gp_states_after_min}",
             "general_bound": rep.general_bound}
    for i, r in enumerate(rep.rounds, start=1):
        line = (f"d={r.d_total} frd={r.frd_states} triples={r.accept_triples} "
                f"ngp={r.ngp_states} gp={r.gp_raw}->{r.gp_min} witnesses={r.witnesses}")
        if timings:
            line += f" seconds={r.seconds}"
        items[f"round.{i}"] = line
    if rep.abort:
        for k, v in sorted(rep.abort.items()):
            items[f"abort.{k}"] = v
    return items


def run_thinness(S, cfg, gamma_prime=None, log=None):
    rep = compute_thinness(S, cfg.thinness_params(), gamma_prime=gamma_prime, log=log)
    items = thinness_items(rep, cfg.timings)
    P = S.presentation
    diffs = [f"d1: {P.format(d)}" for d in sorted(rep.D_T.d1, key=lambda d: (len(d), d))]
    diffs += [f"d2: {P.format(d)}" for d in sorted(rep.D_T.d2, key=lambda d: (len(d), d))]
    files = {"thinness_report.txt": format_report(items),
             "triangle_differences.txt": "\n".join(diffs) + "\n"}
    if rep.FRD is not None:
        files["FRD.fsa"] = format_fsa(rep.FRD.machine)
    if rep.GP is not None:
        files["GP.fsa"] = format_fsa(rep.GP)
    return rep, files, items


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class RunManifest:
    entries: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path):
        p = Path(path)
        return cls(parse_report(p.read_text()) if p.exists() else {})

    def text(self):
        return format_report(self.entries)

    def status(self, stage):
        return self.entries.get(f"stage.{stage}")

    def files(self, stage):
        v = self.entries.get(f"stage.{stage}.files", "")
        return v.split() if v else []

    def clear_from(self, stage):
        drop = STAGES[STAGES.index(stage):]
        for key in list(self.entries):
            parts = key.split(".")
            if parts[0] in ("stage", "timing") and len(parts) > 1 and parts[1] in drop:
                del self.entries[key]


def _write(out, files):
    for name, text in files.items():
        (out / name).write_text(text)


def run_pipeline(cfg, log=None):
    """Run the selected stages; returns ``(exit_status, manifest)``."""
    if cfg.out is None:
        raise InputError("the pipeline needs an output directory")
    say = (lambda m: None) if cfg.quiet else (log or print)
    src = resolve_input(cfg.input)
    text = src.read_text()
    P = load_presentation(src)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    mpath = out / "manifest.txt"
    man = RunManifest.load(mpath)
    base = {"tool": f"hypgrp {__version__}", "input": src.name,
            "input_sha256": hashlib.sha256(text.encode()).hexdigest()}
    if any(man.entries.get(k) != v for k, v in base.items()):
        man = RunManifest()
    man.entries.update(base)
    (out / "input.hgp").write_text(text)

    wanted = [s for s in STAGES if s in cfg.stages]
    if not wanted:
        raise InputError("no stages selected")
    last = STAGES.index(wanted[-1])
    status = HALTED
    R = S = None
    gamma_prime = None

    def done(stage):
        key = _digest(cfg.stage_config(stage))
        return (not cfg.force and man.status(stage) in ("done", "halted", "inconclusive",
                                                           "aborted")
                and man.entries.get(f"stage.{stage}.config") == key
                and all((out / f).exists() for f in man.files(stage)))

    def record(stage, state, files, t0):
        man.entries[f"stage.{stage}"] = state
        man.entries[f"stage.{stage}.config"] = _digest(cfg.stage_config(stage))
        man.entries[f"stage.{stage}.files"] = " ".join(sorted(files))
        if cfg.timings:
            man.entries[f"timing.{stage}"] = f"{time.monotonic() - t0:.3f}"
        mpath.write_text(man.text())

    for i, stage in enumerate(STAGES[:last + 1]):
        t0 = time.monotonic()
        skip = done(stage)
        if not skip:
            man.clear_from(stage)
        if stage == "kb":
            if skip:
                R = parse_rules((out / "rules.txt").read_text(), P, str(out / "rules.txt"))
                say("kb: already done")
            else:
                R, files, summary = run_kb(P, cfg)
                _write(out, files)
                record("kb", "done", files, t0)
                say(f"kb: {summary['rules']} rules, confluent={summary['confluent']}")
        elif stage == "autstruct":
            # later stages need the structure in memory, so it is rebuilt
            # (deterministically) even when its files are up to date
            if skip and STAGES[last] == "autstruct":
                say("autstruct: already done")
                continue
            S, files, summary = run_autstruct(R)
            if not skip:
                _write(out, files)
                record("autstruct", "done", files, t0)
            say(f"autstruct: W {summary['W_states']} states, gamma {summary['gamma']}")
        elif stage == "verify":
            if skip:
                items = load_report(out / "verify_report.txt")
                halted = items.get("halted") == "true"
                say("verify: already done")
            else:
                rep, files, items = run_verify(S, cfg, log=say)
                halted = rep.halted
                _write(out, files)
                record("verify", "halted" if halted else "inconclusive", files, t0)
                say(f"verify: halted={halted} n={items['n_final']} "
                    f"gamma'={items['gamma_prime']}")
            if not halted:
                status = INCONCLUSIVE
                break
            gamma_prime = int(items["gamma_prime"])
        elif stage == "thinness":
            if skip:
                items = load_report(out / "thinness_report.txt")
                completed = items.get("completed") == "true"
                say("thinness: already done")
            else:
                rep, files, items = run_thinness(S, cfg, gamma_prime, log=say)
                completed = rep.completed
                _write(out, files)
                record("thinness", "done" if completed else "aborted", files, t0)
                say(f"thinness: completed={completed} delta_raw={items['delta_raw']}")
            if not completed:
                status = INCONCLUSIVE
    mpath.write_text(man.text())
    return status, man


"""Text formats: automata (``fsa v1``), rewriting rules and ``key: value`` reports."""

from pathlib import Path

import numpy as np

from .errors import InputError
from .fsa import PAD, Alphabet, Automaton, PairAlphabet, n_labels
from .rewriting import RewritingSystem, _enc


# ---------------------------------------------------------------------------
# automata


def format_fsa(M):
    """``fsa v1`` text of ``M``; states are written 1-based in their current numbering."""
    A = M.alphabet
    lines = [
        "fsa v1",
        f"arity: {M.arity}",
        "alphabet: " + " ".join(A.letters),
        f"padding: {PAD}",
        f"states: {M.n_states}",
        f"initial: {M.initial + 1}",
        "accepting: " + " ".join(str(i + 1) for i in np.flatnonzero(M.accepting)),
    ]
    if M.arity == 1:
        name = A.letters.__getitem__
    else:
        name = PairAlphabet(A).format_label
    for s, row in enumerate(M.rows):
        for lab, t in enumerate(row):
            if t >= 0:
                lines.append(f"{s + 1} {name(lab)} {t + 1}")
    return "\n".join(lines) + "\n"


_HEADER = ("arity", "alphabet", "padding", "states", "initial", "accepting")


def parse_fsa(text, source="<fsa>"):
    """Parse ``fsa v1`` text.  Errors name the offending line."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "fsa v1":
        raise InputError(f"{source} line 1: expected 'fsa v1'")
    head = {}
    body = []
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if sep and key.strip() in _HEADER:
            key = key.strip()
            if key in head:
                raise InputError(f"{source} line {no}: repeated '{key}'")
            head[key] = (no, value.strip())
        else:
            if line.startswith("trans:"):
                line = line[len("trans:"):].strip()
            body.append((no, line))
    missing = [k for k in _HEADER if k not in head and k != "accepting"]
    if missing:
        raise InputError(f"{source}: missing {', '.join(missing)}")

    def number(key):
        no, value = head[key]
        try:
            return int(value)
        except ValueError:
            raise InputError(f"{source} line {no}: '{key}' must be an integer") from None

    arity = number("arity")
    if arity not in (1, 2):
        raise InputError(f"{source} line {head['arity'][0]}: arity must be 1 or 2")
    if head["padding"][1] != PAD:
        raise InputError(f"{source} line {head['padding'][0]}: padding must be '{PAD}'")
    try:
        A = Alphabet(tuple(head["alphabet"][1].split()))
    except InputError as e:
        raise InputError(f"{source} line {head['alphabet'][0]}: {e}") from None
    n = number("states")
    if n < 1:
        raise InputError(f"{source} line {head['states'][0]}: need at least one state")

    def state(text, no):
        try:
            s = int(text)
        except ValueError:
            raise InputError(f"{source} line {no}: bad state {text!r}") from None
        if not 1 <= s <= n:
            raise InputError(f"{source} line {no}: state {s} out of range 1..{n}")
        return s - 1

    initial = state(head["initial"][1], head["initial"][0])
    accepting = np.zeros(n, dtype=bool)
    if "accepting" in head:
        no, value = head["accepting"]
        for tok in value.split():
            accepting[state(tok, no)] = True
    delta = np.full((n, n_labels(A, arity)), -1, dtype=np.int32)
    pairs = PairAlphabet(A)
    for no, line in body:
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"{source} line {no}: expected 's label t'")
        s = state(parts[0], no)
        t = state(parts[2], no)
        try:
            lab = A.index(parts[1]) if arity == 1 else pairs.parse_label(parts[1])
        except InputError as e:
            raise InputError(f"{source} line {no}: {e}") from None
        if delta[s, lab] >= 0:
            raise InputError(f"{source} line {no}: duplicate transition from {s + 1} on {parts[1]}")
        delta[s, lab] = t
    return Automaton(A, arity, delta, accepting, initial)


def save_fsa(M, path):
    Path(path).write_text(format_fsa(M))


def load_fsa(path):
    return parse_fsa(Path(path).read_text(), str(path))


# ---------------------------------------------------------------------------
# reports


def _value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return " ".join(_value(x) for x in v)
    return str(v)


def format_report(items):
    """``key: value`` lines, in the given order."""
    out = []
    for key, value in items.items() if isinstance(items, dict) else items:
        if ":" in key or "\n" in key:
            raise InputError(f"bad report key {key!r}")
        out.append(f"{key}: {_value(value)}")
    return "\n".join(out) + "\n"


def parse_report(text):
    """Inverse of :func:`format_report`; values stay strings."""
    out = {}
    for no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise InputError(f"report line {no}: expected 'key: value'")
        out[key.strip()] = value.strip()
    return out


def save_report(items, path):
    Path(path).write_text(format_report(items))


def load_report(path):
    return parse_report(Path(path).read_text())


# ---------------------------------------------------------------------------
# rewriting rules


def format_rules(R):
    P = R.presentation
    lines = [f"confluent: {_value(R.confluent)}"]
    for key, value in R.stats.items():
        lines.append(f"{key}: {_value(value)}")
    for r in R.rules:
        lines.append(f"rule: {P.format(r.lhs) or 'e'} -> {P.format(r.rhs) or 'e'}")
    return "\n".join(lines) + "\n"


def parse_rules(text, P, source="<rules>"):
    table = {}
    stats = {}
    confluent = False
    for no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "rule":
            lhs, arrow, rhs = value.partition("->")
            if not arrow:
                raise InputError(f"{source} line {no}: expected 'lhs -> rhs'")
            try:
                table[_enc(P.word(lhs.strip()))] = _enc(P.word(rhs.strip()))
            except InputError as e:
                raise InputError(f"{source} line {no}: {e}") from None
        elif key == "confluent":
            confluent = value == "true"
        else:
            stats[key] = int(value) if value.lstrip("-").isdigit() else value
    return RewritingSystem(P, table, confluent, stats)

"""Group presentations, short-lex Knuth-Bendix completion and word reduction.

Words are tuples of letter indices into the presentation's alphabet, whose
order is the short-lex order.  Internally the completion works on strings
(one character per letter) because substring search and slicing on ``str``
are far faster than on tuples.
"""

import heapq
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError, StateError
from .fsa import Alphabet, Automaton, minimize

# ---------------------------------------------------------------------------
# words


def inverse_word(word, inverse):
    return tuple(inverse[x] for x in reversed(word))


def free_reduce(word, inverse):
    out = []
    for x in word:
        if out and out[-1] == inverse[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def shortlex_less(u, v):
    return (len(u), tuple(u)) < (len(v), tuple(v))


def prefix(word, i):
    return tuple(word[:i])


def _enc(word):
    return "".join(map(chr, word))


def _dec(s):
    return tuple(map(ord, s))


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    """Generators with formal inverses, a total order and relators."""

    alphabet: Alphabet
    inverse: tuple
    relators: tuple
    generators: tuple
    name: str = ""

    def __post_init__(self):
        inv = self.inverse
        if len(inv) != self.alphabet.size:
            raise InputError("inverse map must cover the whole alphabet")
        for x, y in enumerate(inv):
            if not 0 <= y < len(inv) or inv[y] != x:
                raise InputError(f"inverse map is not an involution at {self.alphabet.letters[x]!r}")
        for r in self.relators:
            if not r:
                raise InputError("empty relator")

    @property
    def letters(self):
        return self.alphabet.letters

    def word(self, text):
        return self.alphabet.parse(text)

    def format(self, word):
        return self.alphabet.format(word) if word else "e"

    def inv(self, word):
        return inverse_word(word, self.inverse)


_TOKEN = re.compile(r"\(|\)|\^-?\d+|[^\s()^]+")


def _parse_relator(text, names, multi):
    """Relator syntax: letters, ``x^n`` powers and ``(...)^n`` groups."""
    tokens = _TOKEN.findall(text)
    stack = [[]]
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        i += 1
        if tok == "(":
            stack.append([])
            continue
        if tok == ")":
            if len(stack) == 1:
                raise InputError(f"unbalanced ')' in relator {text!r}")
            group = stack.pop()
            if i < len(tokens) and tokens[i].startswith("^"):
                group = _power(group, int(tokens[i][1:]), names)
                i += 1
            stack[-1].extend(group)
            continue
        if tok.startswith("^"):
            raise InputError(f"misplaced exponent in relator {text!r}")
        letters = [tok] if multi else list(tok)
        for name in letters:
            if name not in names:
                raise InputError(f"unknown letter {name!r} in relator {text!r}")
        word = [names[name] for name in letters]
        if i < len(tokens) and tokens[i].startswith("^"):
            last = _power([word[-1]], int(tokens[i][1:]), names)
            word = word[:-1] + last
            i += 1
        stack[-1].extend(word)
    if len(stack) != 1:
        raise InputError(f"unbalanced '(' in relator {text!r}")
    return stack[0]


def _power(word, n, names):
    inv = names["__inverse__"]
    if n < 0:
        word = [inv[x] for x in reversed(word)]
        n = -n
    return word * n


def parse_presentation(text, name=""):
    """Parse the ``hgp v1`` presentation format.

    ::

        hgp v1
        generators: a b
        inverses: a=A b=B
        order: a A b B          # optional
        relator: a^2
        relator: (ab)^7
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "hgp v1":
        raise InputError("line 1: expected 'hgp v1'")
    gens, pairs, order, relators = None, None, None, []
    where = {}
    for lineno, line in lines[1:]:
        key, sep, value = line.partition(":")
        if not sep:
            raise InputError(f"line {lineno}: expected 'key: value'")
        key, value = key.strip(), value.strip()
        where[key] = lineno
        if key == "generators":
            gens = value.split()
        elif key == "inverses":
            pairs = []
            for item in value.split():
                g, eq, h = item.partition("=")
                if not eq or not g or not h:
                    raise InputError(f"line {lineno}: bad inverse declaration {item!r}")
                pairs.append((g, h))
        elif key == "order":
            order = value.split()
        elif key == "relator":
            relators.append((lineno, value))
        elif key == "name":
            name = name or value
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if not gens:
        raise InputError("no generators declared")
    inv_name = {}
    at = f"line {where.get('inverses', 1)}: "
    for g, h in pairs or []:
        if g not in gens:
            raise InputError(f"{at}inverse declared for unknown generator {g!r}")
        for a, b in ((g, h), (h, g)):
            if inv_name.get(a, b) != b:
                raise InputError(f"{at}inverse of {a!r} declared twice")
            inv_name[a] = b
    for g in gens:
        if g not in inv_name:
            raise InputError(f"{at}generator {g!r} has no inverse declared")
    default = []
    for g in gens:
        for x in (g, inv_name[g]):
            if x not in default:
                default.append(x)
    if order is None:
        order = default
    elif sorted(order) != sorted(default):
        raise InputError(f"line {where['order']}: order must list every generator and "
                         "inverse exactly once")
    alphabet = Alphabet(tuple(order))
    idx = {x: i for i, x in enumerate(order)}
    inverse = tuple(idx[inv_name[x]] for x in order)
    names = dict(idx)
    names["__inverse__"] = inverse
    multi = any(len(x) > 1 for x in order)
    rels = []
    for lineno, value in relators:
        try:
            word = _parse_relator(value, names, multi)
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if not word:
            raise InputError(f"line {lineno}: empty relator")
        rels.append(tuple(word))
    return Presentation(alphabet, inverse, tuple(rels), tuple(gens), name)


def resolve_input(path):
    """``path`` itself, or the bundled example when given a bare name such as ``G1``."""
    if not Path(path).exists() and (DATA / f"{path}.hgp").exists():
        return DATA / f"{path}.hgp"
    return Path(path)


def load_presentation(path):
    path = resolve_input(path)
    with open(path) as fh:
        text = fh.read()
    stem = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return parse_presentation(text, name=stem)


DATA = Path(__file__).parent / "data"


def example_path(name):
    """Path of a bundled presentation: G1..G4, F2, Z, Z2, Zab."""
    path = DATA / f"{name}.hgp"
    if not path.exists():
        known = ", ".join(sorted(p.stem for p in DATA.glob("*.hgp")))
        raise InputError(f"no bundled presentation {name!r} (have {known})")
    return path


def load_example(name):
    return load_presentation(example_path(name))


# ---------------------------------------------------------------------------
# rewriting systems


@dataclass(frozen=True)
class Rule:
    lhs: tuple
    rhs: tuple


@dataclass
class RewritingSystem:
    """Short-lex rewriting rules for a presentation.

    ``confluent`` is true only when completion finished with every critical
    pair resolved and nothing discarded by the length cap; only then is
    :meth:`reduce` a solution of the word problem.  :meth:`rewrite` applies
    the rules regardless, which is always sound (the result equals the input
    in the group and is short-lex no larger).
    """

    presentation: Presentation
    table: dict = field(default_factory=dict)  # encoded lhs -> encoded rhs
    confluent: bool = False
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self._lengths = sorted({len(l) for l in self.table})

    @property
    def rules(self):
        out = [Rule(_dec(l), _dec(r)) for l, r in self.table.items()]
        out.sort(key=lambda r: (len(r.lhs), r.lhs))
        return out

    def __len__(self):
        return len(self.table)

    def _rewrite(self, s):
        table = self.table
        lengths = self._lengths
        out = []
        pending = list(s)
        pending.reverse()
        while pending:
            out.append(pending.pop())
            n = len(out)
            for k in lengths:
                if k > n:
                    break
                r = table.get("".join(out[n - k:]))
                if r is not None:
                    del out[n - k:]
                    pending.extend(reversed(r))
                    break
        return "".join(out)

    def rewrite(self, word):
        """Apply rules leftmost-first until none applies."""
        return _dec(self._rewrite(_enc(word)))

    def reduce(self, word):
        if not self.confluent:
            raise StateError("reduce needs a confluent rewriting system")
        return self.rewrite(word)

    def is_irreducible(self, word):
        s = _enc(word)
        for i in range(len(s)):
            for k in self._lengths:
                if i + k > len(s):
                    break
                if s[i:i + k] in self.table:
                    return False
        return True

    def add_rule(self, lhs, rhs):
        """Insert a (sound) equation as a rule without re-completing."""
        l, r = self._rewrite(_enc(lhs)), self._rewrite(_enc(rhs))
        if l == r:
            return False
        if (len(l), _dec(l)) < (len(r), _dec(r)):
            l, r = r, l
        self.table[l] = r
        self._lengths = sorted({len(x) for x in self.table})
        self.confluent = False
        return True


def _key(s):
    return (len(s), s)


def kb_complete(P, max_rules=2000, max_rule_len=None, max_seconds=None, max_iterations=None):
    """Short-lex Knuth-Bendix completion with caps.

    Critical pairs are processed shortest-first with interreduction after
    each new rule, so the outcome is deterministic.  When a cap stops the
    run, or an equation longer than ``max_rule_len`` had to be discarded,
    the returned system is flagged non-confluent; its rules are still valid
    equations of the group.
    """
    inv = P.inverse
    table = {}
    lengths = {}
    heap = []
    counter = 0

    def push(a, b):
        nonlocal counter
        heapq.heappush(heap, (max(len(a), len(b)), counter, a, b))
        counter += 1

    def rewrite(s):
        out = []
        pending = list(s)
        pending.reverse()
        ks = sorted(lengths)
        while pending:
            out.append(pending.pop())
            n = len(out)
            for k in ks:
                if k > n:
                    break
                r = table.get("".join(out[n - k:]))
                if r is not None:
                    del out[n - k:]
                    pending.extend(reversed(r))
                    break
        return "".join(out)

    def drop(l):
        lengths[len(l)] -= 1
        if not lengths[len(l)]:
            del lengths[len(l)]
        return table.pop(l)

    for x in range(P.alphabet.size):
        push(chr(x) + chr(inv[x]), "")
    for r in P.relators:
        push(_enc(r), "")

    start = time.monotonic()
    discarded = 0
    iterations = 0
    stopped = None
    while heap:
        iterations += 1
        if max_iterations is not None and iterations > max_iterations:
            stopped = "iterations"
            break
        if max_seconds is not None and time.monotonic() - start > max_seconds:
            stopped = "time"
            break
        _, _, a, b = heapq.heappop(heap)
        l, r = rewrite(a), rewrite(b)
        if l == r:
            continue
        if _key(l) < _key(r):
            l, r = r, l
        if max_rule_len is not None and len(l) > max_rule_len:
            discarded += 1
            continue
        for L in [L for L in table if l in L]:
            push(L, drop(L))
        table[l] = r
        lengths[len(l)] = lengths.get(len(l), 0) + 1
        for L, R in list(table.items()):
            if l in R:
                table[L] = rewrite(R)
        for L, R in list(table.items()):
            for (A, B), (C, D) in (((l, r), (L, R)), ((L, R), (l, r))):
                for k in range(1, min(len(A), len(C))):
                    if A[-k:] == C[:k]:
                        push(B + C[k:], A[:-k] + D)
                if L == l:
                    break
        if len(table) > max_rules:
            stopped = "rules"
            break
    confluent = stopped is None and discarded == 0
    stats = {
        "rules": len(table),
        "max_rule_length": max((len(l) for l in table), default=0),
        "iterations": iterations,
        "discarded": discarded,
        "stopped": stopped or "",
    }
    return RewritingSystem(P, table, confluent, stats)


# ---------------------------------------------------------------------------
# word acceptor


def factor_avoiding_acceptor(alphabet, forbidden):
    """Minimal acceptor of the words containing no forbidden word as a factor.

    Aho-Corasick automaton of the forbidden words with the match states
    removed.
    """
    k = alphabet.size
    children = [dict()]
    terminal = [False]
    for w in forbidden:
        node = 0
        for x in w:
            nxt = children[node].get(x)
            if nxt is None:
                nxt = len(children)
                children[node][x] = nxt
                children.append(dict())
                terminal.append(False)
            node = nxt
        terminal[node] = True
    n = len(children)
    fail = [0] * n
    goto = [[0] * k for _ in range(n)]
    order = [0]
    for x in range(k):
        c = children[0].get(x)
        goto[0][x] = c if c is not None else 0
        if c is not None:
            order.append(c)
    i = 1
    while i < len(order):
        node = order[i]
        i += 1
        terminal[node] = terminal[node] or terminal[fail[node]]
        for x in range(k):
            c = children[node].get(x)
            if c is None:
                goto[node][x] = goto[fail[node]][x]
            else:
                fail[c] = goto[fail[node]][x]
                goto[node][x] = c
                order.append(c)
    delta = np.array(goto, dtype=np.int32).reshape(n, k)
    term = np.array(terminal)
    delta[np.isin(delta, np.flatnonzero(term))] = -1
    delta[term] = -1
    return minimize(Automaton(alphabet, 1, delta, ~term, 0))


def build_word_acceptor(R):
    """Acceptor of the words with no rule left-hand side as a factor.

    For a confluent system these are exactly the short-lex normal forms.
    """
    if not R.confluent:
        raise StateError("word acceptor from rules needs a confluent system")
    return factor_avoiding_acceptor(R.presentation.alphabet, [r.lhs for r in R.rules])

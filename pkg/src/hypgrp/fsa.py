"""Finite state automata over letters and padded pairs of letters.

Deterministic automata are partial: a missing transition rejects.  They are
stored as an ``(n_states, n_labels)`` int32 table with ``-1`` for "no
transition", which keeps the large intermediate machines of the thinness
computation affordable.  Non-deterministic automata (the results of
projection and composition) are stored as per-state dicts.

Two-variable automata read padded pairs.  With ``k`` letters the padding
symbol has index ``k`` and the pair ``(x, y)`` has label ``x * (k + 1) + y``;
the pair ``(pad, pad)`` would be the last label and is simply never
allocated, so it cannot be represented.

Every constructor that returns a deterministic automaton returns it in
canonical form: dead states removed and states numbered in breadth-first
order from the initial state, exploring labels in alphabet order.
"""

from collections import deque
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .errors import InputError, ResourceLimitError

PAD = "_"


@dataclass(frozen=True)
class Alphabet:
    """Ordered letters; the order is the one used for short-lex comparison."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if len(set(letters)) != len(letters):
            raise InputError(f"repeated letter in alphabet {letters}")
        if PAD in letters:
            raise InputError(f"{PAD!r} is reserved for padding")
        if not all(isinstance(x, str) and x and not any(c.isspace() for c in x)
                   for x in letters):
            raise InputError(f"bad letter names {letters}")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(letters)})

    @property
    def size(self):
        return len(self.letters)

    @property
    def pad(self):
        return len(self.letters)

    def index(self, letter):
        try:
            return self._index[letter]
        except KeyError:
            raise InputError(f"letter {letter!r} not in alphabet") from None

    def parse(self, text):
        """Read a word written with letter names.

        Single-character alphabets may be written run together ("aBc");
        otherwise letters are separated by whitespace.  ``""`` and ``"e"``
        (when ``e`` is not a letter) both denote the empty word.
        """
        text = text.strip()
        if text in ("", "e", "1") and text not in self._index:
            return ()
        if " " in text or any(len(x) > 1 for x in self.letters):
            tokens = text.split()
        else:
            tokens = list(text)
        return tuple(self.index(t) for t in tokens)

    def format(self, word):
        sep = "" if all(len(x) == 1 for x in self.letters) else " "
        return sep.join(self.letters[i] for i in word)


class PairAlphabet:
    """Labels ``(x, y)`` with ``x, y`` letters or padding, never both padding."""

    def __init__(self, base):
        self.base = base
        self.k = base.size
        self.size = (self.k + 1) ** 2 - 1

    def label(self, x, y):
        return x * (self.k + 1) + y

    def split(self, label):
        return divmod(label, self.k + 1)

    def pairs(self):
        return [self.split(i) for i in range(self.size)]

    def encode(self, u, v):
        """Labels of the padded pair ``(u, v)``."""
        n = max(len(u), len(v))
        pad = self.k
        return [self.label(u[i] if i < len(u) else pad, v[i] if i < len(v) else pad)
                for i in range(n)]

    def decode(self, labels):
        pad = self.k
        u, v = [], []
        for lab in labels:
            x, y = self.split(lab)
            if x != pad:
                u.append(x)
            if y != pad:
                v.append(y)
        return tuple(u), tuple(v)

    def format_label(self, label):
        x, y = self.split(label)
        name = lambda i: PAD if i == self.k else self.base.letters[i]
        return f"{name(x)},{name(y)}"

    def parse_label(self, text):
        parts = text.split(",")
        if len(parts) != 2:
            raise InputError(f"bad pair label {text!r}")
        x, y = (self.k if p == PAD else self.base.index(p) for p in parts)
        if x == self.k and y == self.k:
            raise InputError("label (_,_) is not allowed")
        return self.label(x, y)


def n_labels(alphabet, arity):
    return alphabet.size if arity == 1 else (alphabet.size + 1) ** 2 - 1


class Automaton:
    """A partial deterministic automaton.

    ``payloads``, when present, holds one hashable item per state (a sorted
    tuple of states for reversed machines, a group element for
    word-difference machines).
    """

    __slots__ = ("alphabet", "arity", "delta", "accepting", "initial", "payloads", "_rows")

    def __init__(self, alphabet, arity, delta, accepting, initial=0, payloads=None):
        if arity not in (1, 2):
            raise InputError(f"arity must be 1 or 2, not {arity}")
        self.alphabet = alphabet
        self.arity = arity
        self.delta = np.asarray(delta, dtype=np.int32).reshape(-1, n_labels(alphabet, arity))
        self.accepting = np.asarray(accepting, dtype=bool)
        self.initial = int(initial)
        self.payloads = payloads
        self._rows = None
        if len(self.accepting) != len(self.delta):
            raise InputError("accepting mask does not match state count")

    def __repr__(self):
        return (f"Automaton(arity={self.arity}, states={self.n_states}, "
                f"accepting={int(self.accepting.sum())})")

    @property
    def n_states(self):
        return len(self.delta)

    @property
    def n_labels(self):
        return self.delta.shape[1]

    @property
    def pairs(self):
        return PairAlphabet(self.alphabet)

    @property
    def rows(self):
        """Transition table as nested lists, for tight Python loops."""
        if self._rows is None:
            self._rows = self.delta.tolist()
        return self._rows

    def labels_of(self, word):
        if self.arity == 1:
            if isinstance(word, str):
                word = self.alphabet.parse(word)
            k = self.alphabet.size
            for x in word:
                if not 0 <= x < k:
                    raise InputError(f"symbol {x!r} outside alphabet")
            return list(word)
        u, v = word
        if isinstance(u, str):
            u = self.alphabet.parse(u)
        if isinstance(v, str):
            v = self.alphabet.parse(v)
        k = self.alphabet.size
        for x in (*u, *v):
            if not 0 <= x < k:
                raise InputError(f"symbol {x!r} outside alphabet")
        return self.pairs.encode(u, v)

    def state_after(self, labels, start=None):
        """Target of the label sequence, or -1 if some transition is missing."""
        s = self.initial if start is None else start
        rows = self.rows
        for lab in labels:
            if s < 0:
                return -1
            s = rows[s][lab]
        return s

    def accepts(self, word):
        s = self.state_after(self.labels_of(word))
        return s >= 0 and bool(self.accepting[s])

    run = accepts

    def is_empty(self):
        return not self.accepting.any()

    def identical(self, other):
        return (self.alphabet == other.alphabet and self.arity == other.arity
                and self.initial == other.initial
                and np.array_equal(self.delta, other.delta)
                and np.array_equal(self.accepting, other.accepting))


class NFA:
    """Non-deterministic automaton; ``edges[s]`` maps label -> list of targets."""

    def __init__(self, alphabet, arity, n_states, initial, accepting, edges, eps=None,
                 payloads=None):
        self.alphabet = alphabet
        self.arity = arity
        self.n_states = n_states
        self.initial = sorted(set(initial))
        self.accepting = set(accepting)
        self.edges = edges
        self.eps = eps if eps is not None else [[] for _ in range(n_states)]
        self.payloads = payloads

    def __repr__(self):
        return f"NFA(arity={self.arity}, states={self.n_states})"

    def closure(self, states):
        seen = set(states)
        stack = list(states)
        eps = self.eps
        while stack:
            s = stack.pop()
            for t in eps[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def accepts(self, word):
        helper = Automaton(self.alphabet, self.arity,
                           np.zeros((0, n_labels(self.alphabet, self.arity))), [])
        current = self.closure(self.initial)
        for lab in helper.labels_of(word):
            nxt = set()
            for s in current:
                nxt.update(self.edges[s].get(lab, ()))
            current = self.closure(nxt)
        return bool(current & self.accepting)

    run = accepts


def empty_automaton(alphabet, arity=1):
    return Automaton(alphabet, arity, np.full((1, n_labels(alphabet, arity)), -1), [False])


def universal_automaton(alphabet):
    """One-state acceptor of every word."""
    return Automaton(alphabet, 1, np.zeros((1, alphabet.size)), [True])


def as_nfa(M):
    if isinstance(M, NFA):
        return M
    edges = [{lab: [t] for lab, t in enumerate(row) if t >= 0} for row in M.rows]
    return NFA(M.alphabet, M.arity, M.n_states, [M.initial], np.flatnonzero(M.accepting),
               edges, payloads=M.payloads)


# ---------------------------------------------------------------------------
# canonical form

def _graph(delta):
    n = len(delta)
    src, lab = np.nonzero(delta >= 0)
    dst = delta[src, lab]
    return csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))


def coaccessible(delta, accepting):
    """Mask of states from which an accepting state can be reached."""
    n = len(delta)
    if n == 0:
        return np.zeros(0, dtype=bool)
    g = _graph(delta).T.tocsr()
    # a virtual node n feeds every accepting state in the reversed graph
    acc = np.flatnonzero(accepting)
    rows = np.concatenate([g.indptr, np.full(1, g.indptr[-1] + len(acc))])
    ext = csr_matrix((np.ones(g.nnz + len(acc), dtype=np.int8),
                      np.concatenate([g.indices, acc]), rows), shape=(n + 1, n + 1))
    order = breadth_first_order(ext, n, directed=True, return_predecessors=False)
    mask = np.zeros(n + 1, dtype=bool)
    mask[order] = True
    return mask[:n]


def bfs_numbering(delta, initial, keep=None):
    """Canonical order of the states reachable from ``initial`` through kept states.

    Processes one breadth-first level at a time: a new state's rank is its
    first appearance in the row-major successor list of the current level,
    which is exactly the order a queue-based search would find it.
    """
    n = len(delta)
    keep = np.ones(n, dtype=bool) if keep is None else keep
    seen = np.zeros(n, dtype=bool)
    seen[initial] = True
    order = [np.array([initial], dtype=np.int64)]
    frontier = order[0]
    while len(frontier):
        succ = delta[frontier].ravel()
        succ = succ[succ >= 0]
        succ = succ[keep[succ] & ~seen[succ]]
        if not len(succ):
            break
        uniq, first = np.unique(succ, return_index=True)
        frontier = uniq[np.argsort(first, kind="stable")]
        seen[frontier] = True
        order.append(frontier)
    return np.concatenate(order)


def _renumber(M, order):
    n = M.n_states
    new = np.full(n + 1, -1, dtype=np.int32)  # index -1 maps to -1
    new[order] = np.arange(len(order), dtype=np.int32)
    delta = new[M.delta[order]]
    payloads = None if M.payloads is None else [M.payloads[i] for i in order]
    return Automaton(M.alphabet, M.arity, delta, M.accepting[order], 0, payloads)


def canonical(M):
    """Drop dead and unreachable states and renumber breadth-first.

    The initial state is kept even when the language is empty.
    """
    if M.n_states == 0:
        return empty_automaton(M.alphabet, M.arity)
    keep = coaccessible(M.delta, M.accepting)
    if not keep[M.initial]:
        return empty_automaton(M.alphabet, M.arity)
    return _renumber(M, bfs_numbering(M.delta, M.initial, keep))


def accessible(M):
    """Renumber breadth-first keeping every reachable state, dead or not."""
    return _renumber(M, bfs_numbering(M.delta, M.initial))


# ---------------------------------------------------------------------------
# determinization and minimization

def determinize(N, keep_subsets=False, max_states=None, prune=True):
    """Subset construction.

    States are discovered breadth-first with labels in alphabet order.  With
    ``keep_subsets`` each state's payload is the sorted tuple of NFA states
    it stands for.  ``prune=False`` keeps subsets that cannot reach
    acceptance (the raw count some tables report).
    """
    N = as_nfa(N)
    L = n_labels(N.alphabet, N.arity)
    edges = N.edges
    eps_free = not any(N.eps)
    start = tuple(sorted(N.closure(N.initial)))
    index = {start: 0}
    subsets = [start]
    rows = []
    acc = []
    accepting = N.accepting
    i = 0
    while i < len(subsets):
        T = subsets[i]
        i += 1
        acc.append(any(s in accepting for s in T))
        buckets = {}
        for s in T:
            for lab, ts in edges[s].items():
                b = buckets.get(lab)
                if b is None:
                    buckets[lab] = set(ts)
                else:
                    b.update(ts)
        row = [-1] * L
        for lab in sorted(buckets):
            U = buckets[lab]
            if not eps_free:
                U = N.closure(U)
            key = tuple(sorted(U))
            j = index.get(key)
            if j is None:
                j = len(subsets)
                index[key] = j
                subsets.append(key)
                if max_states is not None and j >= max_states:
                    raise ResourceLimitError(
                        f"determinization exceeded {max_states} states",
                        {"states": j + 1, "processed": i})
            row[lab] = j
        rows.append(row)
    M = Automaton(N.alphabet, N.arity, np.array(rows, dtype=np.int32).reshape(-1, L), acc, 0,
                  subsets if keep_subsets else None)
    return canonical(M) if prune else M


def _hash_rows(sig, weights):
    return (sig.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


def minimize(M):
    """Canonical minimal deterministic automaton (payloads dropped)."""
    M = canonical(Automaton(M.alphabet, M.arity, M.delta, M.accepting, M.initial))
    n, L = M.delta.shape
    if n <= 1:
        return M
    rng = np.random.default_rng(0x5eed)
    weights = rng.integers(1, 2**63, size=L + 1, dtype=np.uint64) | np.uint64(1)
    cls = M.accepting.astype(np.int64)
    n_cls = len(np.unique(cls))
    ext = np.concatenate([M.delta, np.full((1, L), -1, dtype=np.int32)])
    sink = n  # the missing transition target
    while True:
        cls_ext = np.append(cls, -1)
        succ = cls_ext[np.where(ext[:n] >= 0, ext[:n], sink)]
        sig = np.column_stack([cls, succ]) + 1
        _, inv = np.unique(_hash_rows(sig, weights), return_inverse=True)
        inv = inv.ravel()
        rep = np.zeros(inv.max() + 1, dtype=np.int64)
        rep[inv[::-1]] = np.arange(n)[::-1]
        if not np.array_equal(sig, sig[rep[inv]]):  # hash collision
            _, inv = np.unique(sig, axis=0, return_inverse=True)
            inv = inv.ravel()
        new_n = inv.max() + 1
        cls = inv.astype(np.int64)
        if new_n == n_cls:
            break
        n_cls = new_n
    rep = np.zeros(n_cls, dtype=np.int64)
    rep[cls[::-1]] = np.arange(n)[::-1]
    cls_ext = np.append(cls, -1)
    delta = cls_ext[np.where(M.delta[rep] >= 0, M.delta[rep], n)]
    Q = Automaton(M.alphabet, M.arity, delta, M.accepting[rep], cls[M.initial])
    return canonical(Q)


# ---------------------------------------------------------------------------
# products

def _check_compatible(M1, M2):
    if M1.alphabet != M2.alphabet or M1.arity != M2.arity:
        raise InputError("automata have different alphabets or arities")


def intersect(M1, M2):
    _check_compatible(M1, M2)
    r1, r2 = M1.rows, M2.rows
    a1, a2 = M1.accepting, M2.accepting
    L = M1.n_labels
    start = (M1.initial, M2.initial)
    index = {start: 0}
    states = [start]
    rows, acc = [], []
    for s1, s2 in states:
        acc.append(bool(a1[s1] and a2[s2]))
        row = [-1] * L
        x1, x2 = r1[s1], r2[s2]
        for lab in range(L):
            t1 = x1[lab]
            if t1 < 0:
                continue
            t2 = x2[lab]
            if t2 < 0:
                continue
            key = (t1, t2)
            j = index.get(key)
            if j is None:
                j = index[key] = len(states)
                states.append(key)
            row[lab] = j
        rows.append(row)
    return canonical(Automaton(M1.alphabet, M1.arity, rows, acc))


def pair_product(W1, W2):
    """Two-variable acceptor of the padded pairs ``(u, v)`` with u in L(W1), v in L(W2)."""
    if W1.arity != 1 or W2.arity != 1 or W1.alphabet != W2.alphabet:
        raise InputError("pair_product needs two one-variable automata on one alphabet")
    A = W1.alphabet
    P = PairAlphabet(A)
    k = A.size
    r1, r2 = W1.rows, W2.rows
    a1, a2 = W1.accepting, W2.accepting
    END = -1
    start = (W1.initial, W2.initial)
    index = {start: 0}
    states = [start]
    rows, acc = [], []

    def target(key):
        j = index.get(key)
        if j is None:
            j = index[key] = len(states)
            states.append(key)
        return j

    for s1, s2 in states:
        row = [-1] * P.size
        if s1 == END:
            acc.append(bool(a2[s2]))
            for y in range(k):
                t = r2[s2][y]
                if t >= 0:
                    row[P.label(k, y)] = target((END, t))
        elif s2 == END:
            acc.append(bool(a1[s1]))
            for x in range(k):
                t = r1[s1][x]
                if t >= 0:
                    row[P.label(x, k)] = target((t, END))
        else:
            acc.append(bool(a1[s1] and a2[s2]))
            for x in range(k):
                t1 = r1[s1][x]
                if t1 < 0:
                    continue
                for y in range(k):
                    t2 = r2[s2][y]
                    if t2 >= 0:
                        row[P.label(x, y)] = target((t1, t2))
                if a2[s2]:
                    row[P.label(x, k)] = target((t1, END))
            if a1[s1]:
                for y in range(k):
                    t2 = r2[s2][y]
                    if t2 >= 0:
                        row[P.label(k, y)] = target((END, t2))
        rows.append(row)
    return canonical(Automaton(A, 2, rows, acc))


def project(M, coordinate):
    """Quantify over the other variable: padding reads become epsilon moves."""
    if M.arity != 2:
        raise InputError("project needs a two-variable automaton")
    if coordinate not in (1, 2):
        raise InputError("coordinate must be 1 or 2")
    P = M.pairs
    k = P.k
    edges = [dict() for _ in range(M.n_states)]
    eps = [[] for _ in range(M.n_states)]
    for s, row in enumerate(M.rows):
        for lab, t in enumerate(row):
            if t < 0:
                continue
            x, y = P.split(lab)
            keep = x if coordinate == 1 else y
            if keep == k:
                eps[s].append(t)
            else:
                edges[s].setdefault(keep, []).append(t)
    return NFA(M.alphabet, 1, M.n_states, [M.initial], np.flatnonzero(M.accepting), edges, eps)


def converse(M):
    """Swap the two coordinates of a two-variable automaton."""
    if M.arity != 2:
        raise InputError("converse needs a two-variable automaton")
    P = M.pairs
    perm = [P.label(*reversed(P.split(lab))) for lab in range(P.size)]
    delta = np.empty_like(M.delta)
    delta[:, perm] = M.delta
    return canonical(Automaton(M.alphabet, 2, delta, M.accepting, M.initial))


def compose(M1, M2, max_states=None):
    """``{(u, w) : exists v, (u, v) in L(M1) and (v, w) in L(M2)}``."""
    if M1.arity != 2 or M2.arity != 2 or M1.alphabet != M2.alphabet:
        raise InputError("compose needs two-variable automata on one alphabet")
    N = compose_nfa(M1, M2)
    return minimize(determinize(N, max_states=max_states))


def compose_nfa(M1, M2):
    P = M1.pairs
    k = P.k
    r1, r2 = M1.rows, M2.rows
    # for each state of M1, map middle letter -> [(outer label x, target)]
    by_mid1 = []
    for row in r1:
        d = {}
        for lab, t in enumerate(row):
            if t >= 0:
                x, y = P.split(lab)
                d.setdefault(y, []).append((x, t))
        by_mid1.append(d)
    by_mid2 = []
    for row in r2:
        d = {}
        for lab, t in enumerate(row):
            if t >= 0:
                y, z = P.split(lab)
                d.setdefault(y, []).append((z, t))
        by_mid2.append(d)
    start = (M1.initial, M2.initial)
    index = {start: 0}
    states = [start]
    edges, eps = [], []
    for s1, s2 in states:
        out, e = {}, []
        m1, m2 = by_mid1[s1], by_mid2[s2]
        for y, left in m1.items():
            right = m2.get(y)
            if not right:
                continue
            for x, t1 in left:
                for z, t2 in right:
                    key = (t1, t2)
                    j = index.get(key)
                    if j is None:
                        j = index[key] = len(states)
                        states.append(key)
                    if x == k and z == k:
                        e.append(j)
                    else:
                        out.setdefault(P.label(x, z), []).append(j)
        edges.append(out)
        eps.append(e)
    a1, a2 = M1.accepting, M2.accepting
    acc = [i for i, (s1, s2) in enumerate(states) if a1[s1] and a2[s2]]
    return NFA(M1.alphabet, 2, len(states), [0], acc, edges, eps, payloads=states)


# ---------------------------------------------------------------------------
# reversal

def reverse_subsets(M, starts, max_states=None):
    """Subset construction for the reversed machine from the given start subsets.

    Returns ``(subsets, rows)``: the subsets in breadth-first discovery order
    (starts first, in the order given) and their transition rows.  A
    transition on ``lab`` from ``T`` goes to the full inverse image of ``T``.
    """
    L = M.n_labels
    preds = [[[] for _ in range(M.n_states)] for _ in range(L)]
    for s, row in enumerate(M.rows):
        for lab, t in enumerate(row):
            if t >= 0:
                preds[lab][t].append(s)
    index = {}
    subsets = []
    for T in starts:
        T = tuple(sorted(T))
        if T not in index:
            index[T] = len(subsets)
            subsets.append(T)
    rows = []
    i = 0
    while i < len(subsets):
        T = subsets[i]
        i += 1
        row = [-1] * L
        for lab in range(L):
            p = preds[lab]
            U = set()
            for t in T:
                U.update(p[t])
            if not U:
                continue
            key = tuple(sorted(U))
            j = index.get(key)
            if j is None:
                j = index[key] = len(subsets)
                subsets.append(key)
                if max_states is not None and j >= max_states:
                    raise ResourceLimitError(f"reversal exceeded {max_states} states",
                                             {"states": j + 1})
            row[lab] = j
        rows.append(row)
    return subsets, rows


def reverse_with_subsets(M, max_states=None):
    """Deterministic acceptor of the reversed language, keeping subset payloads.

    State ``T`` is the set of states of ``M`` from which the reversal of the
    word read so far leads to acceptance, so with ``M`` reaching ``tau`` on
    ``v`` and the result reaching ``T`` on ``w``, ``tau in T`` exactly when
    ``v + reversed(w)`` is accepted by ``M``.  Not minimized: merging states
    would lose the payloads.
    """
    M = canonical(M)
    start = tuple(np.flatnonzero(M.accepting).tolist())
    if not start:
        return empty_automaton(M.alphabet, M.arity)
    subsets, rows = reverse_subsets(M, [start], max_states)
    acc = [M.initial in T for T in subsets]
    return Automaton(M.alphabet, M.arity, np.array(rows, dtype=np.int32).reshape(-1, M.n_labels),
                     acc, 0, subsets)


# ---------------------------------------------------------------------------
# language comparison

def _decode(M, labels):
    if M.arity == 1:
        return tuple(labels)
    return M.pairs.decode(labels)


def diff_witnesses(M1, M2, cap=1):
    """Words of L(M1) missing from L(M2), in strictly increasing short-lex order.

    Breadth-first over the product with a sink for missing M2 transitions;
    each product state contributes its least word, so at most one witness
    per state.  An empty result means L(M1) is contained in L(M2).
    """
    _check_compatible(M1, M2)
    r1, r2 = M1.rows, M2.rows
    a1, a2 = M1.accepting, M2.accepting
    L = M1.n_labels
    start = (M1.initial, M2.initial)
    parent = {start: None}
    queue = deque([start])
    found = []
    while queue and len(found) < cap:
        key = queue.popleft()
        s1, s2 = key
        if a1[s1] and (s2 < 0 or not a2[s2]):
            labels = []
            k = key
            while parent[k] is not None:
                k, lab = parent[k]
                labels.append(lab)
            found.append(_decode(M1, labels[::-1]))
        x1 = r1[s1]
        x2 = r2[s2] if s2 >= 0 else None
        for lab in range(L):
            t1 = x1[lab]
            if t1 < 0:
                continue
            t2 = x2[lab] if x2 is not None else -1
            nk = (t1, t2)
            if nk not in parent:
                parent[nk] = (key, lab)
                queue.append(nk)
    return found


def equivalent(M1, M2):
    return not diff_witnesses(M1, M2, 1) and not diff_witnesses(M2, M1, 1)


def shortlex_key(word):
    """Sort key for words and for padded pairs (compared as label sequences)."""
    return (len(word), tuple(word))


# ---------------------------------------------------------------------------
# counting and enumeration

def count_by_length(M, max_len):
    """Number of accepted words (or pairs) of each length ``0..max_len``."""
    counts = []
    vec = np.zeros(M.n_states, dtype=object)
    vec[M.initial] = 1
    src, lab = np.nonzero(M.delta >= 0)
    dst = M.delta[src, lab]
    for _ in range(max_len + 1):
        counts.append(int(vec[M.accepting].sum()))
        nxt = np.zeros(M.n_states, dtype=object)
        np.add.at(nxt, dst, vec[src])
        vec = nxt
    return counts


def words_up_to(M, max_len):
    """All accepted words of length at most ``max_len``, in short-lex order."""
    out = []
    level = [((), M.initial)]
    rows = M.rows
    for _ in range(max_len + 1):
        nxt = []
        for labels, s in level:
            if M.accepting[s]:
                out.append(_decode(M, labels))
            for lab, t in enumerate(rows[s]):
                if t >= 0:
                    nxt.append((labels + (lab,), t))
        level = nxt
    return out


def all_words(k, max_len):
    for n in range(max_len + 1):
        yield from product(range(k), repeat=n)


def path_counts(M, max_len):
    """``counts[n][s]`` = number of accepted words of length ``n`` read from ``s``."""
    src, lab = np.nonzero(M.delta >= 0)
    dst = M.delta[src, lab]
    counts = [np.where(M.accepting, 1, 0).astype(object)]
    for _ in range(max_len):
        prev = counts[-1]
        cur = np.zeros(M.n_states, dtype=object)
        np.add.at(cur, src, prev[dst])
        counts.append(cur)
    return counts


def sample_word(M, length, rng, counts=None):
    """Uniformly random accepted word (label sequence) of the given length, or None."""
    counts = counts or path_counts(M, length)
    s = M.initial
    total = counts[length][s]
    if total == 0:
        return None
    rows = M.rows
    out = []
    for n in range(length, 0, -1):
        r = rng.randrange(int(counts[n][s]))
        for lab, t in enumerate(rows[s]):
            if t < 0:
                continue
            c = int(counts[n - 1][t])
            if r < c:
                out.append(lab)
                s = t
                break
            r -= c
    return tuple(out)

"""Short-lex automatic structures: word differences, word acceptor, multipliers.

The structure is found by the usual fixpoint.  Start from the word
differences of the rewriting rules, build the word acceptor ``W`` and the
multipliers ``M_x`` they determine, and look for words of ``L(W)`` that some
multiplier has no partner for.  Each such word yields new differences; the
loop stops when the projections of every multiplier are exactly ``L(W)``.

Completion does not terminate for most hyperbolic groups, so the rules are
usually a capped, non-confluent system.  Reduction during the loop therefore
combines the rules with difference-based rewriting, and the finished
structure reduces words itself (see :meth:`AutomaticStructure.reduce`).
"""

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError, StateError
from .fsa import (Automaton, accessible, canonical, determinize, diff_witnesses,
                  intersect, minimize, path_counts, project, sample_word)
from .rewriting import RewritingSystem, factor_avoiding_acceptor, inverse_word

EQ, LT, GT, PADDED = 0, 1, 2, 3


class WordDifferenceSet:
    """Insertion-ordered set of normal-form words, always containing 1."""

    def __init__(self, elements=()):
        self._items = [()]
        self._index = {(): 0}
        for e in elements:
            self.add(e)

    def add(self, e):
        e = tuple(e)
        if e in self._index:
            return False
        self._index[e] = len(self._items)
        self._items.append(e)
        return True

    def __contains__(self, e):
        return tuple(e) in self._index

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def index(self, e):
        return self._index[tuple(e)]

    @property
    def max_length(self):
        return max(map(len, self._items))

    def copy(self):
        return WordDifferenceSet(self._items)


@dataclass
class WordDifferenceMachine:
    """Two-variable machine whose states are labelled by group elements."""

    machine: Automaton
    alpha: list
    accepting: frozenset

    @property
    def n_states(self):
        return self.machine.n_states

    def elements(self):
        return WordDifferenceSet(self.alpha)


def prefix_differences(u, v, reduce, inverse, k):
    """Differences ``u(i)^-1 v(i)`` of the padded pair, chained letter by letter.

    Chaining ``d -> reduce(x^-1 d y)`` gives exactly the labels a word
    difference machine computes, so the pair is then accepted by it.
    """
    n = max(len(u), len(v))
    d = ()
    out = [d]
    for i in range(n):
        x = (inverse[u[i]],) if i < len(u) else ()
        y = (v[i],) if i < len(v) else ()
        d = reduce(x + d + y)
        out.append(d)
    return out


def _transition_table(D, reduce, inverse, k):
    """``T[i, label]`` = index in D of reduce(x^-1 d_i y), or -1."""
    P = k + 1
    T = np.full((len(D), P * P - 1), -1, dtype=np.int32)
    for i, d in enumerate(D):
        left = [reduce((inverse[x],) + d) for x in range(k)] + [d]
        for x in range(P):
            base = left[x]
            for y in range(P):
                if x == k and y == k:
                    continue
                e = reduce(base + (y,)) if y < k else base
                j = D._index.get(e)
                if j is not None:
                    T[i, x * P + y] = j
    return T


def build_wd_machine(D, reducer, inverse=None, accepting=None, alphabet=None):
    """Word-difference machine of ``D``, restricted to states accessible from 1.

    ``reducer`` is anything with a ``reduce`` method (an automatic structure
    or a confluent rewriting system).  ``accepting`` defaults to ``{1}``.
    """
    P = reducer.presentation
    inverse = inverse or P.inverse
    alphabet = alphabet or P.alphabet
    k = alphabet.size
    if not isinstance(D, WordDifferenceSet):
        D = WordDifferenceSet(D)
    T = _transition_table(D, reducer.reduce, inverse, k)
    acc = {()} if accepting is None else {tuple(a) for a in accepting}
    acc_mask = np.array([d in acc for d in D])
    M = accessible(Automaton(alphabet, 2, T, acc_mask, 0, list(D)))
    return WordDifferenceMachine(M, list(M.payloads), frozenset(acc))


def seed_differences(R, reduce=None):
    """1 together with the prefix differences of every rule."""
    P = R.presentation
    reduce = reduce or R.rewrite
    D = WordDifferenceSet()
    for x in range(P.alphabet.size):
        D.add(reduce((x,)))
    for rule in R.rules:
        for d in prefix_differences(rule.lhs, rule.rhs, reduce, P.inverse, P.alphabet.size):
            D.add(d)
    return D


# ---------------------------------------------------------------------------
# difference-based reduction used while the structure is being built


def _diff_reduce_once(word, T, k):
    """Replace the first prefix that the difference table shows reducible.

    Returns the new word, or None when no prefix is reducible.
    """
    P = k + 1
    layers = [{(0, EQ): None}]
    cur = layers[0]
    for i, x in enumerate(word):
        nxt = {}
        for (d, f) in cur:
            row = T[d]
            if f != PADDED:
                base = x * P
                for y in range(k):
                    e = row[base + y]
                    if e < 0:
                        continue
                    nf = f if f != EQ else (EQ if y == x else (LT if y < x else GT))
                    key = (e, nf)
                    if key not in nxt:
                        nxt[key] = ((d, f), y)
            e = row[x * P + k]
            if e >= 0:
                key = (e, PADDED)
                if key not in nxt:
                    nxt[key] = ((d, f), k)
        layers.append(nxt)
        for hit in ((0, LT), (0, PADDED)):
            if hit in nxt:
                v = []
                key = hit
                for j in range(i + 1, 0, -1):
                    prev, y = layers[j][key]
                    if y != k:
                        v.append(y)
                    key = prev
                return tuple(reversed(v)) + tuple(word[i + 1:])
        cur = nxt
    return None


class _Reducer:
    """Rules plus difference-table rewriting; sound but not always complete."""

    def __init__(self, R, presentation):
        self.R = R
        self.presentation = presentation
        self.k = presentation.alphabet.size
        self.table = None
        self.cache = {}

    def set_table(self, T):
        self.table = T.tolist()
        self.cache = {}

    def reduce(self, word):
        word = tuple(word)
        hit = self.cache.get(word)
        if hit is not None:
            return hit
        w = self.R.rewrite(word)
        if self.table is not None:
            while True:
                nw = _diff_reduce_once(w, self.table, self.k)
                if nw is None:
                    break
                w = self.R.rewrite(nw)
        self.cache[word] = w
        return w


# ---------------------------------------------------------------------------
# word acceptor and multipliers from a difference table


def _acceptor_from_table(alphabet, T, max_states=None):
    """Words with no factor shown reducible by the difference table.

    A state is the set of comparisons ``(d, flag)`` still running against
    the suffixes read so far; the comparison ``(1, EQ)`` is implicit.
    """
    k = alphabet.size
    P = k + 1
    T = T.tolist()
    start = frozenset()
    index = {start: 0}
    states = [start]
    rows = []
    i = 0
    while i < len(states):
        S = states[i]
        i += 1
        row = [-1] * k
        for x in range(k):
            nxt = set()
            dead = False
            for (d, f) in list(S) + [(0, EQ)]:
                r = T[d]
                if f != PADDED:
                    for y in range(k):
                        e = r[x * P + y]
                        if e < 0:
                            continue
                        nf = f if f != EQ else (EQ if y == x else (LT if y < x else GT))
                        if e == 0 and nf in (LT,):
                            dead = True
                            break
                        if not (e == 0 and nf == EQ):
                            nxt.add((int(e), nf))
                    if dead:
                        break
                e = r[x * P + k]
                if e >= 0:
                    if e == 0:
                        dead = True
                        break
                    nxt.add((int(e), PADDED))
            if dead:
                continue
            key = frozenset(nxt)
            j = index.get(key)
            if j is None:
                j = index[key] = len(states)
                states.append(key)
                if max_states is not None and j >= max_states:
                    raise ResourceLimitError(f"word acceptor exceeded {max_states} states",
                                             {"states": j + 1})
            row[x] = j
        rows.append(row)
    return minimize(Automaton(alphabet, 1, rows, [True] * len(rows)))


def _multiplier_product(W, T, n_d):
    """Product of the full difference table with W x W (padded pairs).

    Returns an automaton with one accepting flag per state left unset and
    payloads ``d``; accepting sets are chosen per multiplier afterwards.
    """
    alphabet = W.alphabet
    k = alphabet.size
    P = k + 1
    L = P * P - 1
    nW = W.n_states
    END = nW
    Wext = np.full((nW + 1, P), -1, dtype=np.int64)
    Wext[:nW, :k] = W.delta
    Wext[:nW, k] = np.where(W.accepting, END, -1)
    Wext[END, k] = END
    labs = np.arange(L)
    xs, ys = labs // P, labs % P
    start = (0, W.initial, W.initial)
    index = {start: 0}
    states = [start]
    rows = []
    i = 0
    while i < len(states):
        d, s1, s2 = states[i]
        i += 1
        t_d = T[d]
        t1 = Wext[s1, xs]
        t2 = Wext[s2, ys]
        ok = (t_d >= 0) & (t1 >= 0) & (t2 >= 0)
        # once a word has ended it may only be padded
        row = np.full(L, -1, dtype=np.int32)
        for lab in np.flatnonzero(ok):
            key = (int(t_d[lab]), int(t1[lab]), int(t2[lab]))
            j = index.get(key)
            if j is None:
                j = index[key] = len(states)
                states.append(key)
            row[lab] = j
        rows.append(row)
    delta = np.array(rows, dtype=np.int32).reshape(-1, L)
    return delta, states, END


@dataclass
class AutomaticStructure:
    """Word acceptor, multipliers and the differences they use.

    ``multipliers`` is keyed by letter index, with ``None`` for the equality
    multiplier ``M_1``.
    """

    presentation: object
    rules: RewritingSystem
    W: Automaton
    multipliers: dict
    D_M: WordDifferenceSet
    WD1: WordDifferenceMachine
    differences: WordDifferenceSet = None
    stats: dict = field(default_factory=dict)
    # trimmed, unminimized multipliers whose payloads are their differences
    labelled: dict = field(default_factory=dict)

    def __post_init__(self):
        self._cache = {}
        self._wrows = self.W.rows
        self._mrows = {x: M.rows for x, M in self.multipliers.items()}

    @property
    def gamma(self):
        return self.D_M.max_length

    @property
    def alphabet(self):
        return self.presentation.alphabet

    @property
    def inverse(self):
        return self.presentation.inverse

    def inv(self, word):
        return inverse_word(word, self.presentation.inverse)

    def partner(self, u, x):
        """The accepted ``v`` with ``(u, v)`` in ``L(M_x)``; ``u`` must be in L(W)."""
        M = self.multipliers[x]
        rows = self._mrows[x]
        k = self.alphabet.size
        P = k + 1
        layers = [{M.initial: None}]
        cur = layers[0]
        for a in u:
            nxt = {}
            base = a * P
            for s in cur:
                r = rows[s]
                for y in range(P):
                    t = r[base + y]
                    if t >= 0 and t not in nxt:
                        nxt[t] = (s, y)
            if not nxt:
                raise StateError("word is not accepted by the word acceptor")
            layers.append(nxt)
            cur = nxt
        extra = 0
        while True:
            for s in cur:
                if M.accepting[s]:
                    return self._spell(layers, s, k)
            nxt = {}
            base = k * P
            for s in cur:
                r = rows[s]
                for y in range(k):
                    t = r[base + y]
                    if t >= 0 and t not in nxt:
                        nxt[t] = (s, y)
            extra += 1
            if not nxt or extra > 8:
                raise StateError("multiplier has no partner for the word")
            layers.append(nxt)
            cur = nxt

    @staticmethod
    def _spell(layers, s, k):
        v = []
        for j in range(len(layers) - 1, 0, -1):
            s, y = layers[j][s]
            if y != k:
                v.append(y)
        return tuple(reversed(v))

    def reduce(self, word):
        """Short-lex normal form of ``word``.

        Rules first; then, at the first letter where ``W`` rejects, the
        accepted prefix times that letter is replaced by its multiplier
        partner.  Each replacement strictly decreases the word.
        """
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        w = self.rules.rewrite(word)
        rows = self._wrows
        while True:
            s = self.W.initial
            bad = -1
            for i, x in enumerate(w):
                s = rows[s][x]
                if s < 0:
                    bad = i
                    break
            if bad < 0:
                break
            v = self.partner(w[:bad], w[bad])
            w = self.rules.rewrite(v + w[bad + 1:])
        if len(self._cache) > 200000:
            self._cache.clear()
        self._cache[word] = w
        return w

    def equal(self, u, v):
        return self.reduce(tuple(u) + self.inv(v)) == ()

    def multiply(self, u, v):
        return self.reduce(tuple(u) + tuple(v))


# ---------------------------------------------------------------------------
# the fixpoint


@dataclass
class StructureLimits:
    max_iterations: int = 60
    witnesses_per_check: int = 40
    max_acceptor_states: int = 200000
    fuzz_samples: int = 200
    fuzz_length: int = 30
    close_under_inversion: bool = False
    seed: int = 1


def _check_multipliers(prod_delta, states, W, targets, cap):
    """Projection witnesses for every multiplier.

    Yields ``(x, side, word)`` with ``side`` 1 for a word of L(W) that has
    no partner and 2 for a word with no pre-image.
    """
    out = []
    d_of = np.array([s[0] for s in states], dtype=np.int64)
    # a product state accepts when both W components have ended or accept
    ok1 = np.zeros(len(states), dtype=bool)
    nW = W.n_states
    for i, (_, s1, s2) in enumerate(states):
        a1 = s1 == nW or W.accepting[s1]
        a2 = s2 == nW or W.accepting[s2]
        ok1[i] = a1 and a2
    for x, target in targets:
        acc = ok1 & (d_of == target)
        M = canonical(Automaton(W.alphabet, 2, prod_delta, acc, 0))
        for side in (1, 2):
            Pj = determinize(project(M, side))
            for w in diff_witnesses(W, Pj, cap):
                out.append((x, side, w))
        if x is None:
            diag = [pair for pair in _non_diagonal(M, cap)]
            out.extend((None, 0, pair) for pair in diag)
    return out


def _non_diagonal(M, cap):
    """Accepted pairs ``(u, v)`` with ``u != v`` (for the equality multiplier)."""
    k = M.alphabet.size
    P = k + 1
    diag = np.full_like(M.delta, -1)
    for x in range(k):
        diag[:, x * P + x] = M.delta[:, x * P + x]
    D = canonical(Automaton(M.alphabet, 2, diag, M.accepting, M.initial))
    return diff_witnesses(M, D, cap)


def build_structure(R, limits=None, verbose=False):
    """Run the difference fixpoint from the rules of ``R``.

    ``R`` may be non-confluent (a capped completion); its rules are used as
    sound equations.  Raises :class:`ResourceLimitError` when the iteration
    cap is hit.
    """
    limits = limits or StructureLimits()
    Pres = R.presentation
    A = Pres.alphabet
    k = A.size
    inverse = Pres.inverse
    R = RewritingSystem(Pres, dict(R.table), False, dict(R.stats))
    red = _Reducer(R, Pres)
    D = seed_differences(R, red.reduce)
    rng = random.Random(limits.seed)
    T = None
    history = []
    for it in range(1, limits.max_iterations + 1):
        # re-normalize the differences with the current reducer
        D = WordDifferenceSet(red.reduce(d) for d in D)
        if limits.close_under_inversion:
            for d in list(D):
                D.add(red.reduce(inverse_word(d, inverse)))
        T = _transition_table(D, red.reduce, inverse, k)
        red.set_table(T)
        W = _acceptor_from_table(A, T, limits.max_acceptor_states)
        W = minimize(intersect(W, factor_avoiding_acceptor(A, [r.lhs for r in R.rules])))
        prod, states, _ = _multiplier_product(W, T, len(D))
        targets = [(None, 0)]
        for x in range(k):
            gx = red.reduce((x,))
            if gx not in D:
                D.add(gx)
            targets.append((x, D.index(gx)))
        if any(t >= T.shape[0] for _, t in targets):
            history.append((len(D), W.n_states, -1))
            continue
        found = _check_multipliers(prod, states, W, targets, limits.witnesses_per_check)
        before = len(D)
        n_rules = len(R)
        for x, side, w in found:
            if side == 0:
                u, v = w
                _record_equation(R, D, red, u, v, k)
            elif side == 1:
                u = w
                xs = (x,) if x is not None else ()
                v = red.reduce(u + xs)
                _record_pair(R, D, red, u, v, (x,) if x is not None else (), k)
            else:
                v = w
                xs = (inverse[x],) if x is not None else ()
                u = red.reduce(v + xs)
                _record_pair(R, D, red, u, v, (x,) if x is not None else (), k)
        if not found and limits.fuzz_samples:
            found = _fuzz(R, D, red, W, prod, states, targets, limits, rng)
        history.append((len(D), W.n_states, len(found)))
        if verbose:
            print(f"iteration {it}: |D|={len(D)} W={W.n_states} witnesses={len(found)}"
                  f" rules={len(R)}", flush=True)
        if not found and len(D) == before and len(R) == n_rules:
            return _finish(Pres, R, red, D, W, prod, states, targets, T, history, it)
    raise ResourceLimitError(
        f"automatic structure not found within {limits.max_iterations} iterations",
        {"differences": len(D), "iterations": limits.max_iterations})


def _record_pair(R, D, red, u, v, xs, k):
    inverse = red.presentation.inverse
    diffs = prefix_differences(u, v, red.reduce, inverse, k)
    for d in diffs:
        D.add(d)
    target = red.reduce(xs)
    if diffs[-1] != target:
        _record_equation(R, D, red, diffs[-1], target, k)


def _record_equation(R, D, red, u, v, k):
    """``u = v`` in the group with ``u != v``: keep it as a rule and keep its differences."""
    if R.add_rule(u, v):
        red.cache = {}
    lhs, rhs = (u, v) if (len(u), u) > (len(v), v) else (v, u)
    for d in prefix_differences(lhs, rhs, red.reduce, red.presentation.inverse, k):
        D.add(d)


def _fuzz(R, D, red, W, prod, states, targets, limits, rng):
    """Sampled relator check of the candidate structure.

    For random accepted words ``u`` and each relator, walking the multipliers
    along the relator must return to ``u``; the first failure gives new
    equations.
    """
    k = red.presentation.alphabet.size
    nW = W.n_states
    accept = np.zeros(len(states), dtype=bool)
    for i, (_, s1, s2) in enumerate(states):
        accept[i] = (s1 == nW or W.accepting[s1]) and (s2 == nW or W.accepting[s2])
    d_of = np.array([s[0] for s in states])
    mults = {}
    for x, t in targets:
        M = canonical(Automaton(W.alphabet, 2, prod, accept & (d_of == t), 0))
        mults[x] = M
    S = AutomaticStructure(red.presentation, R, W, mults, WordDifferenceSet(), None)
    counts = path_counts(W, limits.fuzz_length)
    found = []
    relators = list(red.presentation.relators)
    for _ in range(limits.fuzz_samples):
        n = rng.randint(0, limits.fuzz_length)
        u = sample_word(W, n, rng, counts)
        if u is None:
            continue
        for r in relators + [(x, red.presentation.inverse[x]) for x in range(k)]:
            w = u
            try:
                for x in r:
                    w = S.partner(w, x)
            except StateError:
                found.append((w, x))
                _record_pair(R, D, red, w, red.reduce(w + (x,)), (x,), k)
                break
            if w != u:
                found.append((u, r))
                _record_equation(R, D, red, u, w, k)
                break
        if len(found) >= limits.witnesses_per_check:
            break
    return found


def _finish(Pres, R, red, D, W, prod, states, targets, T, history, iterations):
    nW = W.n_states
    accept = np.zeros(len(states), dtype=bool)
    for i, (_, s1, s2) in enumerate(states):
        accept[i] = (s1 == nW or W.accepting[s1]) and (s2 == nW or W.accepting[s2])
    d_of = np.array([s[0] for s in states])
    mults = {}
    labelled = {}
    used = set()
    D_list = list(D)
    for x, t in targets:
        M = Automaton(W.alphabet, 2, prod, accept & (d_of == t), 0, [s[0] for s in states])
        M = canonical(M)
        M.payloads = [D_list[i] for i in M.payloads]
        used.update(M.payloads)
        labelled[x] = M
        mults[x] = minimize(M)
    D_M = WordDifferenceSet(d for d in D_list if d in used)
    S = AutomaticStructure(Pres, R, W, mults, D_M, None, D,
                           {"iterations": iterations, "history": history,
                            "rules": len(R), "differences": len(D)}, labelled)
    S.WD1 = build_wd_machine(D_M, S)
    return S

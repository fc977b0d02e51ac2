"""The thinness constant of short-lex geodesic triangles.

Triangle ``abc`` has short-lex sides ``u: b -> c``, ``v: c -> a`` and
``w: a -> b``, so ``w u v = 1``; going ``a -> b -> c`` is clockwise.  From a
corner, the two sides are read together up to the meeting vertices:

* the clockwise side forwards (``w`` from ``a``), tracked by ``W``;
* the anticlockwise side backwards (``v`` from its end), tracked by the
  reversed acceptor ``W^R``.

The group element between the two read positions is the difference ``g``.
Moving one step along ``w`` by ``x`` and one step back along ``v`` over the
letter ``y`` changes it to ``x^-1 g y^-1``.  With odd perimeter the clockwise
side reads one extra letter, so the last step is ``(x, pad)`` and ``g``
becomes ``x^-1 g``.

``D2`` collects the differences met on the way and ``D1`` the final ones
(the sides of the small triangle between the three meeting vertices).  FRD
reads corner pairs; three accepting FRD states that fit together describe a
whole triangle.  NGP runs FRD from one corner and then, after a
non-deterministic jump through such a triple, two reversed FRD copies
towards the other corners.  Its determinization GP must accept every pair in
``L(W) x L(W^R)``; pairs it misses give triangles with new differences.
"""

import os
import random
import resource
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .autstruct import WordDifferenceSet
from .errors import InputError, ResourceLimitError, StateError
from .fsa import (Automaton, diff_witnesses, minimize, pair_product, path_counts,
                  reverse_subsets, reverse_with_subsets, sample_word)

INF = -1


# ---------------------------------------------------------------------------
# triangles


def meeting_parameters(lu, lv, lw):
    """``(rho_a, rho_b, rho_c, parity)`` for side lengths ``u: b->c, v: c->a, w: a->b``."""
    if min(lu, lv, lw) < 0 or lu > lv + lw or lv > lu + lw or lw > lu + lv:
        raise InputError(f"side lengths {lu}, {lv}, {lw} violate the triangle inequality")
    rho_a = Fraction(lv + lw - lu, 2)
    rho_b = Fraction(lw + lu - lv, 2)
    rho_c = Fraction(lu + lv - lw, 2)
    parity = "even" if (lu + lv + lw) % 2 == 0 else "odd"
    return rho_a, rho_b, rho_c, parity


def corner_differences(cw, acw, rho, reduce, inverse):
    """Differences read from one corner: ``(intermediate, final)``.

    ``cw`` is the clockwise side read forwards; ``acw`` is the anticlockwise
    side as a word ending at this corner.
    """
    n = int(rho)  # floor for half-integers
    g = ()
    path = [g]
    for i in range(n):
        x = cw[i]
        y = acw[len(acw) - 1 - i]
        g = reduce((inverse[x],) + g + (inverse[y],))
        path.append(g)
    if rho != n:
        g = reduce((inverse[cw[n]],) + g)
    return path, g


def triangle_differences(u, v, w, S):
    """``(d1, d2, (g_a, g_b, g_c))`` for the short-lex triangle with sides u, v, w.

    ``g_a`` is the element from the meeting vertex on ``w`` to the one on
    ``v`` and so on around, so ``g_c g_b g_a = 1``.
    """
    reduce = S.reduce
    inverse = S.presentation.inverse
    if reduce(tuple(w) + tuple(u) + tuple(v)) != ():
        raise InputError("sides do not close up: w u v != 1")
    rho_a, rho_b, rho_c, _ = meeting_parameters(len(u), len(v), len(w))
    d1, d2, gs = [], [], []
    for cw, acw, rho in ((w, v, rho_a), (u, w, rho_b), (v, u, rho_c)):
        path, g = corner_differences(cw, acw, rho, reduce, inverse)
        d2.extend(path)
        d1.append(g)
        gs.append(g)
    return d1, d2, tuple(gs)


@dataclass
class TriangleDifferenceSet:
    d1: WordDifferenceSet = field(default_factory=WordDifferenceSet)
    d2: WordDifferenceSet = field(default_factory=WordDifferenceSet)

    @property
    def union(self):
        out = WordDifferenceSet(self.d2)
        for d in self.d1:
            out.add(d)
        return out

    def __len__(self):
        return len(self.union)

    def add_triangle(self, d1, d2):
        before = (len(self.d1), len(self.d2), len(self))
        for d in d1:
            self.d1.add(d)
        for d in d2:
            self.d2.add(d)
        return (len(self.d1), len(self.d2), len(self)) != before

    def copy(self):
        return TriangleDifferenceSet(WordDifferenceSet(self.d1), WordDifferenceSet(self.d2))


def random_triangle(S, rng, max_len, counts):
    """Sides ``(u, v, w)`` with ``u, v`` random normal forms and ``w`` closing up."""
    sides = []
    for _ in range(2):
        while True:
            n = rng.randint(0, max_len)
            word = sample_word(S.W, n, rng, counts)
            if word is not None:
                break
        sides.append(word)
    u, v = sides
    w = S.reduce(S.inv(u + v))
    return u, v, w


def sample_triangle_differences(S, count=10000, max_len=50, seed=0, max_batches=50,
                                D=None, log=None):
    """Differences of random triangles, in batches until a batch adds nothing."""
    rng = random.Random(seed)
    counts = path_counts(S.W, max_len)
    D = D.copy() if D is not None else TriangleDifferenceSet()
    batches = 0
    while batches < max_batches:
        batches += 1
        grew = False
        for _ in range(count):
            u, v, w = random_triangle(S, rng, max_len, counts)
            d1, d2, _ = triangle_differences(u, v, w, S)
            grew |= D.add_triangle(d1, d2)
        if log:
            log(f"sampling batch {batches}: |D1|={len(D.d1)} |D2|={len(D.d2)} |D_T|={len(D)}")
        if not grew:
            break
    return D


# ---------------------------------------------------------------------------
# FRD


@dataclass
class FRD:
    """Corner-pair automaton with its state components kept alongside."""

    machine: Automaton
    sigma: np.ndarray      # W state
    Sigma: np.ndarray      # W^R state
    g: np.ndarray          # index into elements
    flag: np.ndarray
    elements: list
    WR: Automaton

    @property
    def n_states(self):
        return self.machine.n_states


def _difference_table(D_T, S):
    """``step[i][x][y]`` = index of x^-1 g_i y^-1 (``y = k``: x^-1 g_i), or -1."""
    k = S.alphabet.size
    inverse = S.presentation.inverse
    elems = list(D_T)
    index = {e: i for i, e in enumerate(elems)}
    table = np.full((len(elems), k, k + 1), -1, dtype=np.int64)
    for i, g in enumerate(elems):
        for x in range(k):
            left = S.reduce((inverse[x],) + g)
            j = index.get(left)
            if j is not None:
                table[i, x, k] = j
            for y in range(k):
                j = index.get(S.reduce(left + (inverse[y],)))
                if j is not None:
                    table[i, x, y] = j
    return elems, index, table


def build_FRD(D, S, WR=None):
    """FRD for the triangle difference set ``D`` (trimmed, breadth-first numbered)."""
    W = S.W
    WR = WR if WR is not None else reverse_with_subsets(W)
    k = W.alphabet.size
    P = k + 1
    elems, index, table = _difference_table(D.union, S)
    d1 = np.zeros(len(elems), dtype=bool)
    for e in D.d1:
        d1[index[e]] = True
    wr, rr = W.rows, WR.rows
    start = (W.initial, WR.initial, index[()], 0)
    ids = {start: 0}
    states = [start]
    rows = []
    i = 0
    while i < len(states):
        s, T, g, f = states[i]
        i += 1
        row = [-1] * (P * P - 1)
        if not f:
            ws, rs, tg = wr[s], rr[T], table[g]
            for x in range(k):
                s2 = ws[x]
                if s2 < 0:
                    continue
                tx = tg[x]
                for y in range(P):
                    g2 = tx[y]
                    if g2 < 0:
                        continue
                    if y < k:
                        T2 = rs[y]
                        if T2 < 0:
                            continue
                        key = (s2, T2, int(g2), 0)
                    else:
                        key = (s2, T, int(g2), 1)
                    j = ids.get(key)
                    if j is None:
                        j = ids[key] = len(states)
                        states.append(key)
                    row[x * P + y] = j
        rows.append(row)
    arr = np.array(states, dtype=np.int64).reshape(-1, 4)
    acc = d1[arr[:, 2]]
    M = Automaton(W.alphabet, 2, rows, acc, 0, [tuple(r) for r in arr.tolist()])
    from .fsa import canonical
    M = canonical(M)
    comp = np.array(M.payloads, dtype=np.int64).reshape(-1, 4)
    return FRD(M, comp[:, 0], comp[:, 1], comp[:, 2], comp[:, 3], elems, WR)


def accept_triples(F, S):
    """All ``(a, b, c)`` of accepting FRD states forming a triangle.

    Conditions: ``sigma_a in Sigma_b``, ``sigma_b in Sigma_c``,
    ``sigma_c in Sigma_a``, ``g_c g_b g_a = 1`` and equal parity flags (the
    three corners of a triangle all end on a pad step or none do).  Returned as an
    ``(n, 3)`` array sorted lexicographically.
    """
    acc = np.flatnonzero(F.machine.accepting)
    if not len(acc):
        return np.zeros((0, 3), dtype=np.int64)
    subsets = F.WR.payloads
    n_w = S.W.n_states
    # member[i, j]: sigma of acc[i] lies in Sigma of acc[j]
    contains = np.zeros((F.WR.n_states, n_w), dtype=bool)
    for t, sub in enumerate(subsets):
        contains[t, list(sub)] = True
    member = contains[F.Sigma[acc]][:, F.sigma[acc]].T
    member &= F.flag[acc][:, None] == F.flag[acc][None, :]
    # closing element for each pair of differences that occur
    gs = F.g[acc]
    elems = F.elements
    index = {e: i for i, e in enumerate(elems)}
    used = np.unique(gs)
    close = {}
    for gb in used:
        for ga in used:
            e = S.reduce(S.inv(elems[gb] + elems[ga]))
            close[(gb, ga)] = index.get(e, -1)
    by_g = {}
    for pos, g in enumerate(gs):
        by_g.setdefault(int(g), []).append(pos)
    by_g = {g: np.array(v, dtype=np.int64) for g, v in by_g.items()}
    out = []
    for a in range(len(acc)):
        ga = int(gs[a])
        bs = np.flatnonzero(member[a])
        col_a = member[:, a]
        for b in bs:
            h = close[(int(gs[b]), ga)]
            cand = by_g.get(h)
            if cand is None:
                continue
            ok = cand[member[b, cand] & col_a[cand]]
            if len(ok):
                block = np.empty((len(ok), 3), dtype=np.int64)
                block[:, 0] = acc[a]
                block[:, 1] = acc[b]
                block[:, 2] = acc[ok]
                out.append(block)
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    T = np.concatenate(out)
    order = np.lexsort((T[:, 2], T[:, 1], T[:, 0]))
    return T[order]


# ---------------------------------------------------------------------------
# NGP and GP


def resident_bytes():
    """Current resident set size of this process."""
    try:
        with open("/proc/self/statm") as fh:
            return int(fh.read().split()[1]) * os.sysconf("SC_PAGE_SIZE")
    except (OSError, ValueError, IndexError):
        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def check_memory(cap_bytes, what, stats):
    if cap_bytes is None:
        return
    rss = resident_bytes()
    if rss > cap_bytes:
        stats = dict(stats, resident_bytes=rss, cap_bytes=cap_bytes)
        raise ResourceLimitError(f"{what} exceeded the memory cap "
                                 f"({rss / 2**30:.2f} of {cap_bytes / 2**30:.2f} GiB)", stats)


@dataclass
class NGP:
    """Non-deterministic geodesic-pairs automaton in compressed-row form.

    State ``s`` has edges ``labels[indptr[s]:indptr[s+1]]`` with targets
    ``targets[...]``, sorted by (label, target).  ``kinds[s]`` is 0 for a
    state still inside FRD and 1 for a pair of reversed-FRD states.
    """

    n_states: int
    indptr: np.ndarray
    labels: np.ndarray
    targets: np.ndarray
    accepting: np.ndarray
    keys: list
    alphabet: object

    @property
    def n_edges(self):
        return len(self.targets)

    def to_nfa(self):
        from .fsa import NFA
        edges = []
        for s in range(self.n_states):
            d = {}
            lo, hi = self.indptr[s], self.indptr[s + 1]
            for lab, t in zip(self.labels[lo:hi].tolist(), self.targets[lo:hi].tolist()):
                d.setdefault(lab, []).append(t)
            edges.append(d)
        return NFA(self.alphabet, 2, self.n_states, [0], np.flatnonzero(self.accepting), edges)


class _ReversedFRD:
    """FRD^R from singleton starts, with moves grouped the way NGP reads them."""

    def __init__(self, F, max_states=None):
        M = F.machine
        k = M.alphabet.size
        self.k = k
        P = k + 1
        acc = np.flatnonzero(M.accepting)
        subsets, rows = reverse_subsets(M, [(int(t),) for t in acc], max_states)
        self.n = len(subsets)
        self.single = {int(t): i for i, t in enumerate(acc)}
        self.accepting = np.array([M.initial in T for T in subsets])
        # path 1 reads (x_db, x_ab) and shows x_ab; path 2 reads (x_ac, x_dc) and shows x_ac
        self.by_second = []   # [rho][x_ab] -> sorted targets over letters x_db
        self.by_first = []    # [rho][x_ac] -> sorted targets over letters x_dc
        self.pad_second = []  # [rho] -> sorted targets of (x_db, pad)
        self.pad_first = []   # [rho][x_ac] -> target of (x_ac, pad) or -1
        for row in rows:
            sec = [set() for _ in range(k)]
            fst = [set() for _ in range(k)]
            pads = set()
            padf = [-1] * k
            for lab, t in enumerate(row):
                if t < 0:
                    continue
                x, y = divmod(lab, P)
                if x < k and y < k:
                    sec[y].add(t)
                    fst[x].add(t)
                elif y == k:
                    pads.add(t)
                    padf[x] = t
            self.by_second.append([sorted(s) for s in sec])
            self.by_first.append([sorted(s) for s in fst])
            self.pad_second.append(sorted(pads))
            self.pad_first.append(padf)


def build_NGP(F, triples, max_states=None, mem_cap_bytes=None, log=None):
    """Build NGP reachable from the FRD initial state.

    States are either an FRD state (first part of the path) or a pair
    ``(rho1, rho2)`` of FRD^R states, ``INF`` marking a finished leg.
    """
    k = F.machine.alphabet.size
    P = k + 1
    L = P * P - 1
    check_memory(mem_cap_bytes, "FRD triples", {"accept_triples": len(triples)})
    R = _ReversedFRD(F, max_states)
    check_memory(mem_cap_bytes, "reversed FRD", {"frd_reverse_states": R.n})
    racc = R.accepting
    frows = F.machine.rows
    # triples are sorted by their first state, so each one owns a slice
    firsts, lo_idx, counts = np.unique(triples[:, 0], return_index=True, return_counts=True)
    spans = {int(a): (int(lo), int(lo + n)) for a, lo, n in zip(firsts, lo_idx, counts)}
    tails = triples[:, 1:]

    def by_sigma(a):
        span = spans.get(a)
        return tails[span[0]:span[1]].tolist() if span else ()

    triple_set_b_eq_c = set(triples[(triples[:, 1] == 0) & (triples[:, 2] == 0), 0].tolist())

    def leg1(pi, xab):
        if xab == k:
            return [INF] if pi == INF or racc[pi] else []
        return [] if pi == INF else R.by_second[pi][xab]

    def leg2(pi, xac):
        if xac == k:
            return [INF] if pi == INF or racc[pi] else []
        return [] if pi == INF else R.by_first[pi][xac]

    pair_moves = {}

    def moves_from_pair(p1, p2):
        key = (p1, p2)
        got = pair_moves.get(key)
        if got is not None:
            return got
        out = []
        opts1 = [leg1(p1, x) for x in range(P)]
        opts2 = [leg2(p2, y) for y in range(P)]
        for x in range(P):
            o1 = opts1[x]
            if not o1:
                continue
            for y in range(P):
                if x == k and y == k:
                    continue
                o2 = opts2[y]
                if not o2:
                    continue
                lab = x * P + y
                for r1 in o1:
                    for r2 in o2:
                        out.append((lab, (r1, r2)))
        pair_moves[key] = out
        return out

    # state keys: ("F", sigma) or (rho1, rho2); use ints for compactness
    index = {("F", 0): 0}
    keys = [("F", 0)]
    edge_lab, edge_tgt, indptr = [], [], [0]
    i = 0
    while i < len(keys):
        key = keys[i]
        i += 1
        moves = []
        if key[0] == "F":
            s = key[1]
            row = frows[s]
            for lab, t in enumerate(row):
                if t < 0:
                    continue
                x, y = divmod(lab, P)
                if y < k:
                    moves.append((lab, ("F", t)))
                else:
                    # odd jump: (x_ab, pad) in FRD then a pad-first step on both legs
                    for b, c in by_sigma(t):
                        pi1 = R.single[b]
                        pi2 = R.single[c]
                        r1s = R.pad_second[pi1]
                        if not r1s:
                            continue
                        padf = R.pad_first[pi2]
                        for xac in range(k):
                            r2 = padf[xac]
                            if r2 < 0:
                                continue
                            for r1 in r1s:
                                moves.append((x * P + xac, (r1, r2)))
            for b, c in by_sigma(s):
                moves.extend(moves_from_pair(R.single[b], R.single[c]))
        else:
            moves = moves_from_pair(*key)
        out = set()
        for lab, tk in moves:
            j = index.get(tk)
            if j is None:
                j = index[tk] = len(keys)
                keys.append(tk)
            out.add((lab, j))
        out = sorted(out)
        edge_lab.extend(l for l, _ in out)
        edge_tgt.extend(t for _, t in out)
        indptr.append(len(edge_lab))
        if max_states is not None and len(keys) > max_states:
            raise ResourceLimitError(f"NGP exceeded {max_states} states",
                                     {"ngp_states": len(keys), "ngp_processed": i})
        if i % 1024 == 0:
            check_memory(mem_cap_bytes, "NGP", {"ngp_states": len(keys), "ngp_processed": i,
                                                "ngp_edges": len(edge_lab)})
    acc = np.zeros(len(keys), dtype=bool)
    for j, key in enumerate(keys):
        if key[0] == "F":
            acc[j] = key[1] in triple_set_b_eq_c
        else:
            r1, r2 = key
            acc[j] = (r1 == INF or racc[r1]) and (r2 == INF or racc[r2])
    return NGP(len(keys), np.array(indptr, dtype=np.int64), np.array(edge_lab, dtype=np.int32),
               np.array(edge_tgt, dtype=np.int32), acc, keys, F.machine.alphabet)


def determinize_ngp(N, max_states=None, mem_cap_bytes=None):
    """Subset construction for a compressed-row NFA (no epsilon moves).

    Subsets are kept as the bytes of sorted int32 arrays, which keeps the
    G3-sized runs (hundreds of thousands of subsets) within memory.
    """
    P = int(round((N.alphabet.size + 1)))
    L = P * P - 1
    indptr, labels, targets = N.indptr, N.labels.astype(np.int64), N.targets.astype(np.int64)
    n = N.n_states
    start = np.array([0], dtype=np.int32)
    index = {start.tobytes(): 0}
    subsets = [start]
    rows = []
    acc = []
    total = 1
    i = 0
    while i < len(subsets):
        S = subsets[i]
        i += 1
        acc.append(bool(N.accepting[S].any()))
        row = np.full(L, -1, dtype=np.int32)
        lo, hi = indptr[S], indptr[S + 1]
        if len(S) == 1:
            sel = np.arange(lo[0], hi[0])
        else:
            lens = hi - lo
            sel = np.repeat(lo - np.cumsum(np.concatenate([[0], lens[:-1]])), lens) + \
                np.arange(lens.sum())
        if len(sel):
            codes = np.unique(labels[sel] * n + targets[sel])
            labs = codes // n
            tg = (codes % n).astype(np.int32)
            cuts = np.flatnonzero(np.diff(labs)) + 1
            starts = np.concatenate([[0], cuts])
            ends = np.concatenate([cuts, [len(codes)]])
            for a, b in zip(starts.tolist(), ends.tolist()):
                T = tg[a:b]
                kb = T.tobytes()
                j = index.get(kb)
                if j is None:
                    j = index[kb] = len(subsets)
                    subsets.append(T)
                    total += len(T)
                    if max_states is not None and j >= max_states:
                        raise ResourceLimitError(f"GP exceeded {max_states} states",
                                                 {"gp_states": j + 1, "gp_processed": i})
                    if j % 1024 == 0:
                        check_memory(mem_cap_bytes, "GP determinization",
                                     {"gp_states": j + 1, "gp_processed": i,
                                      "subset_elements": total})
                row[int(labs[a])] = j
        rows.append(row)
    delta = np.vstack(rows) if rows else np.zeros((0, L), dtype=np.int32)
    return Automaton(N.alphabet, 2, delta, acc, 0)


# ---------------------------------------------------------------------------
# the refinement loop


@dataclass
class ThinnessRound:
    d_total: int
    frd_states: int
    accept_triples: int
    ngp_states: int
    gp_raw: int
    gp_min: int
    witnesses: int
    seconds: float


@dataclass
class ThinnessReport:
    D_T: TriangleDifferenceSet
    completed: bool
    rounds: list
    delta_raw: int
    frd_states: int = 0
    accept_triples: int = 0
    ngp_states: int = 0
    gp_states_before_min: int = 0
    gp_states_after_min: int = 0
    general_bound: int = None
    FRD: object = None
    GP: Automaton = None
    abort: dict = None

    @property
    def delta_plus_one(self):
        return self.delta_raw + 1

    @property
    def d1_size(self):
        return len(self.D_T.d1)

    @property
    def d2_size(self):
        return len(self.D_T.d2)

    @property
    def d_total(self):
        return len(self.D_T)


@dataclass
class ThinnessParams:
    samples: int = 10000
    sample_len: int = 50
    seed: int = 0
    max_rounds: int = 20
    cex_cap: int = 500
    mem_cap_gib: float = 4.5
    max_batches: int = 50


def general_triangle_bound(delta, gamma, gamma_prime):
    """Thinness bound for all geodesic triangles from the short-lex constants."""
    for v in (delta, gamma, gamma_prime):
        if v is None or v < 0:
            raise InputError("constants must be non-negative integers")
    return delta + 2 * (gamma + gamma_prime) + 3


def witness_triangle(w1, w2, S):
    """Sides ``(u, v, w)`` of the triangle with ``w = w1`` and ``v = reverse(w2)``."""
    w = tuple(w1)
    v = tuple(reversed(w2))
    u = S.reduce(S.inv(w) + S.inv(v))
    return u, v, w


def compute_thinness(S, params=None, gamma_prime=None, log=None, D=None):
    """Sample, then refine ``D_T`` until GP accepts all of ``L(W) x L(W^R)``."""
    params = params or ThinnessParams()
    mem_cap = int(params.mem_cap_gib * 2**30)
    if D is None:
        D = sample_triangle_differences(S, params.samples, params.sample_len, params.seed,
                                        params.max_batches, log=log)
    WR = reverse_with_subsets(S.W)
    target = minimize(pair_product(S.W, minimize(WR)))
    rounds = []
    F = GP = None
    for rnd in range(1, params.max_rounds + 1):
        t0 = time.monotonic()
        F = build_FRD(D, S, WR)
        triples = accept_triples(F, S)
        if log:
            log(f"round {rnd}: |D_T|={len(D)} FRD={F.n_states} triples={len(triples)}")
        try:
            N = build_NGP(F, triples, mem_cap_bytes=mem_cap, log=log)
            if log:
                log(f"round {rnd}: NGP={N.n_states} edges={N.n_edges}")
            G_raw = determinize_ngp(N, mem_cap_bytes=mem_cap)
        except ResourceLimitError as exc:
            stats = dict(exc.stats)
            stats.update(round=rnd, d_total=len(D), frd_states=F.n_states,
                         accept_triples=len(triples), reason=str(exc))
            return _report(D, False, rounds, F, None, gamma_prime, S, abort=stats)
        GP = minimize(G_raw)
        wit = diff_witnesses(target, GP, params.cex_cap)
        rounds.append(ThinnessRound(len(D), F.n_states, len(triples), N.n_states,
                                    G_raw.n_states, GP.n_states, len(wit),
                                    round(time.monotonic() - t0, 3)))
        if log:
            log(f"round {rnd}: GP {G_raw.n_states}->{GP.n_states}, witnesses {len(wit)}")
        if not wit:
            return _report(D, True, rounds, F, GP, gamma_prime, S)
        before = len(D)
        for w1, w2 in wit:
            u, v, w = witness_triangle(w1, w2, S)
            d1, d2, _ = triangle_differences(u, v, w, S)
            D.add_triangle(d1, d2)
        if len(D) == before:
            raise StateError("GP witnesses produced no new triangle differences")
    return _report(D, False, rounds, F, GP, gamma_prime, S,
                   abort={"reason": f"no verification within {params.max_rounds} rounds"})


def _report(D, completed, rounds, F, GP, gamma_prime, S, abort=None):
    delta_raw = D.union.max_length
    last = rounds[-1] if rounds else None
    rep = ThinnessReport(D, completed, rounds, delta_raw, FRD=F, GP=GP, abort=abort)
    if last:
        rep.frd_states = last.frd_states
        rep.accept_triples = last.accept_triples
        rep.ngp_states = last.ngp_states
        rep.gp_states_before_min = last.gp_raw
        rep.gp_states_after_min = last.gp_min
    elif abort:
        rep.frd_states = abort.get("frd_states", 0)
        rep.accept_triples = abort.get("accept_triples", 0)
        rep.ngp_states = abort.get("ngp_states", 0)
    if completed and gamma_prime is not None:
        rep.general_bound = general_triangle_bound(delta_raw, S.gamma, gamma_prime)
    return rep

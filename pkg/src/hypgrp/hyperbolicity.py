"""Proving hyperbolicity by building the geodesic word acceptor.

Round ``n`` works with a finite set of word differences ``WD_n``:

* ``GE_n`` accepts equal-length pairs ``(u, v)`` with ``v`` a normal form and
  ``u = v`` in the group, the comparison staying inside ``WD_n``;
* ``GW_n`` is its first projection, a set of geodesic words;
* ``T_n`` looks for words ``w`` outside ``GW_n`` that are equal to an
  equal-length word of ``GW_n``.  Those are geodesics the set ``WD_n`` has
  missed, and their differences with their normal forms enlarge it.

When ``T_n`` is empty the group is hyperbolic and ``GW_n`` accepts exactly
the geodesic words.  The loop cannot detect non-hyperbolicity; it just runs
out of rounds.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .autstruct import WordDifferenceSet, build_wd_machine, prefix_differences
from .errors import StateError
from .fsa import Automaton, canonical, determinize, minimize, project


@dataclass
class GERound:
    n: int
    wd_states: int
    ge_raw: int
    ge_min: int
    gw_raw: int
    gw_min: int
    t_states: int
    counterexamples: int


@dataclass
class HyperbolicityReport:
    halted: bool
    n_final: int
    gamma: int
    gamma_prime: int
    gamma_prime_closure: int
    GW_final: Automaton
    WD_final: WordDifferenceSet
    GE_final: Automaton = None
    rounds: list = field(default_factory=list)
    papasoglu_vertex: int = None
    papasoglu_midedge: int = None


def build_GE(WDn, W, minimal=True, stats=None):
    """Equal-length pairs ``(u, v)`` accepted by ``WDn`` with ``v`` in ``L(W)``.

    With ``minimal=False`` the trimmed product is returned with each state's
    difference as payload.  ``stats["accessible"]`` receives the size of the
    accessible product before trimming.
    """
    M = WDn.machine
    alpha = WDn.alpha
    k = W.alphabet.size
    P = k + 1
    wd = M.rows
    wr = W.rows
    start = (M.initial, W.initial)
    index = {start: 0}
    states = [start]
    rows, acc = [], []
    i = 0
    while i < len(states):
        d, s = states[i]
        i += 1
        acc.append(bool(M.accepting[d] and W.accepting[s]))
        row = [-1] * (P * P - 1)
        dr, sr = wd[d], wr[s]
        for y in range(k):
            t = sr[y]
            if t < 0:
                continue
            for x in range(k):
                e = dr[x * P + y]
                if e < 0:
                    continue
                key = (e, t)
                j = index.get(key)
                if j is None:
                    j = index[key] = len(states)
                    states.append(key)
                row[x * P + y] = j
        rows.append(row)
    if stats is not None:
        stats["accessible"] = len(states)
    G = Automaton(W.alphabet, 2, rows, acc, 0, [alpha[d] for d, _ in states])
    G = canonical(G)
    if not minimal:
        return G
    return minimize(G)


def build_GW(GE, max_states=None):
    """Minimal acceptor of the first projection of ``GE``."""
    return minimize(determinize(project(GE, 1), max_states=max_states))


def find_T_counterexamples(WDn, GW, cap=500, count_states=False):
    """Words outside ``L(GW)`` equal to an equal-length word of ``L(GW)``.

    Breadth-first, so the words come out in short-lex order of the pairs.
    With ``count_states`` the number of explored product states is returned
    as well.
    """
    M = WDn.machine
    k = GW.alphabet.size
    P = k + 1
    wd = M.rows
    gr = GW.rows
    gacc = GW.accepting
    macc = M.accepting
    start = (M.initial, GW.initial, GW.initial)
    parent = {start: None}
    queue = deque([start])
    found = []
    while queue and len(found) < cap:
        key = queue.popleft()
        d, su, sw = key
        dr, ur = wd[d], gr[su]
        wr = gr[sw] if sw >= 0 else None
        for x in range(k):
            tw = wr[x] if wr is not None else -1
            for y in range(k):
                tu = ur[y]
                if tu < 0:
                    continue
                e = dr[x * P + y]
                if e < 0:
                    continue
                nk = (e, tu, tw)
                if nk in parent:
                    continue
                parent[nk] = (key, x)
                queue.append(nk)
                if macc[e] and gacc[tu] and (tw < 0 or not gacc[tw]):
                    w = []
                    kk = nk
                    while parent[kk] is not None:
                        kk, lx = parent[kk]
                        w.append(lx)
                    found.append(tuple(reversed(w)))
                    if len(found) >= cap:
                        break
            if len(found) >= cap:
                break
    if count_states:
        return found, len(parent)
    return found


def verify_hyperbolic(S, max_iter=20, cex_cap=500, max_states=None, log=None):
    """Run the ``WD_n / GE_n / GW_n / T_n`` loop starting from ``D_M``."""
    Pres = S.presentation
    k = Pres.alphabet.size
    WD_set = WordDifferenceSet(S.D_M)
    rounds = []
    for n in range(1, max_iter + 1):
        WDn = build_wd_machine(WD_set, S)
        counts = {}
        GE_raw = build_GE(WDn, S.W, minimal=False, stats=counts)
        GE = minimize(GE_raw)
        D = determinize(project(GE, 1), max_states=max_states)
        GW = minimize(D)
        cex, t_states = find_T_counterexamples(WDn, GW, cex_cap, count_states=True)
        rounds.append(GERound(n, WDn.n_states, counts["accessible"], GE.n_states, D.n_states,
                              GW.n_states, t_states, len(cex)))
        if log:
            log(f"round {n}: WD {WDn.n_states}, GE {counts['accessible']}->{GE.n_states}, "
                f"GW {D.n_states}->{GW.n_states}, T {t_states}, counterexamples {len(cex)}")
        if not cex:
            used = WordDifferenceSet(GE_raw.payloads)
            return HyperbolicityReport(
                True, n, S.gamma, WordDifferenceSet(WDn.alpha).max_length,
                used.max_length, GW, WordDifferenceSet(WDn.alpha), GE_raw, rounds)
        before = len(WD_set)
        for w in cex:
            v = S.reduce(w)
            if len(v) != len(w):
                raise StateError("counterexample is not geodesic")
            for d in prefix_differences(w, v, S.reduce, Pres.inverse, k):
                WD_set.add(d)
        if len(WD_set) == before:
            raise StateError("counterexamples produced no new word differences")
    return HyperbolicityReport(False, max_iter, S.gamma, WD_set.max_length, WD_set.max_length,
                               GW, WD_set, GE_raw, rounds)


def _bigon_differences(GE, S, x):
    """Differences ``u1(i)^-1 u2(i)`` over geodesic pairs whose ends differ by ``x``.

    ``x`` is a letter, or ``None`` for equal endpoints.  The pairs are
    ``(u1, v1)`` in GE, ``(v1, v2)`` in the multiplier ``M_x`` and
    ``(u2, v2)`` in GE; the product is trimmed before its labels are read.
    """
    M = S.labelled[x]
    k = GE.alphabet.size
    P = k + 1
    END = -2
    ge, mr = GE.rows, M.rows
    gacc, macc = GE.accepting, M.accepting

    def ge_moves(g):
        # (a, b, target) with a, b letters, or (pad, pad, END) after acceptance
        if g == END:
            return [(k, k, END)]
        out = [(lab // P, lab % P, t) for lab, t in enumerate(ge[g]) if t >= 0]
        if gacc[g]:
            out.append((k, k, END))
        return out

    moves = {}

    def cached(g):
        m = moves.get(g)
        if m is None:
            m = moves[g] = ge_moves(g)
        return m

    start = (GE.initial, M.initial, GE.initial)
    index = {start: 0}
    states = [start]
    succ = []
    i = 0
    while i < len(states):
        g1, m, g2 = states[i]
        i += 1
        out = []
        row = mr[m]
        left, right = cached(g1), cached(g2)
        by_c = {}  # v2 letter -> targets of the second GE copy
        for _, c, t2 in right:
            by_c.setdefault(c, []).append(t2)
        for a, b, t1 in left:
            for c, t2s in by_c.items():
                if b == k and c == k:
                    continue
                tm = row[b * P + c]
                if tm < 0:
                    continue
                for t2 in t2s:
                    if t1 == END and t2 == END:
                        continue
                    key = (t1, tm, t2)
                    j = index.get(key)
                    if j is None:
                        j = index[key] = len(states)
                        states.append(key)
                    out.append(j)
        succ.append(out)
    n = len(states)
    accept = np.array([(g1 == END or gacc[g1]) and macc[m] and (g2 == END or gacc[g2])
                       for g1, m, g2 in states])
    # co-accessibility by reverse search
    preds = [[] for _ in range(n)]
    for s, out in enumerate(succ):
        for t in out:
            preds[t].append(s)
    alive = accept.copy()
    stack = list(np.flatnonzero(accept))
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if not alive[s]:
                alive[s] = True
                stack.append(s)
    alpha = GE.payloads
    beta = M.payloads
    out = WordDifferenceSet()
    for s in np.flatnonzero(alive):
        g1, m, g2 = states[s]
        a1 = alpha[g1] if g1 != END else ()
        a2 = alpha[g2] if g2 != END else ()
        out.add(S.reduce(a1 + beta[m] + S.inv(a2)))
    return out


def bigon_closure(report, S):
    """Vertex and mid-edge bigon differences; sets the Papasoglu fields of ``report``."""
    if not report.halted:
        raise StateError("bigon closure needs a halted verification")
    GE = report.GE_final
    vertex = _bigon_differences(GE, S, None)
    midedge = WordDifferenceSet()
    for x in range(S.alphabet.size):
        for d in _bigon_differences(GE, S, x):
            midedge.add(d)
    report.papasoglu_vertex = vertex.max_length
    report.papasoglu_midedge = midedge.max_length
    return vertex, midedge

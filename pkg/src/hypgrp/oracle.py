"""Brute-force checks on a finite ball of the Cayley graph.

Nothing here uses the automatic structure.  Group elements are the
irreducible words of a rewriting system obtained by capped completion with
a rule length cap of at least ``2 * radius + 2``, so every word the ball
needs (products of two ball elements) is rewritten by rules the completion
was allowed to keep.  :func:`CayleyBall.relator_failures` is a cheap
consistency check on top of that.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InputError, ResourceLimitError
from .rewriting import kb_complete


def oracle_system(P, radius, max_rules=200000):
    """Rewriting system used for the word problem inside a ball of ``radius``."""
    longest = max((len(r) for r in P.relators), default=2)
    cap = max(2 * radius + 2, longest + 2)
    return kb_complete(P, max_rules=max_rules, max_rule_len=cap)


@dataclass
class CayleyBall:
    radius: int
    words: list
    lengths: np.ndarray
    adjacency: np.ndarray  # (n, k), -1 when the neighbour lies outside
    system: object
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self._dist = lru_cache(maxsize=1 << 20)(self._distance)
        self._cones = {}

    def __len__(self):
        return len(self.words)

    @property
    def presentation(self):
        return self.system.presentation

    def element(self, word):
        """Ball index of the element represented by ``word``; ``None`` outside."""
        return self.index.get(self.system.rewrite(tuple(word)))

    def reduce(self, word):
        return self.system.rewrite(tuple(word))

    def length(self, word):
        return len(self.reduce(word))

    def _distance(self, i, j):
        inv = self.presentation.inv
        return len(self.system.rewrite(inv(self.words[i]) + self.words[j]))

    def distance(self, i, j):
        """``d(g_i, g_j)`` in the whole Cayley graph."""
        if i == j:
            return 0
        return self._dist(min(i, j), max(i, j))

    def walk(self, start, word):
        """Indices of the vertices along ``word`` from ``start``; ``None`` on leaving."""
        out = [start]
        g = start
        for x in word:
            g = int(self.adjacency[g, x])
            if g < 0:
                return None
            out.append(g)
        return out

    def relator_failures(self):
        """Vertices at which some relator path stays in the ball but does not close."""
        bad = 0
        P = self.presentation
        rels = list(P.relators) + [(x, P.inverse[x]) for x in range(P.alphabet.size)]
        for g in range(len(self)):
            for r in rels:
                path = self.walk(g, r)
                if path is not None and path[-1] != g:
                    bad += 1
        return bad

    def cone(self, h):
        """``levels[t]``: vertices at distance ``t`` from 1 on some geodesic to ``h``."""
        c = self._cones.get(h)
        if c is not None:
            return c
        # predecessors on geodesics, computed in increasing length
        todo = [h]
        while todo:
            g = todo[-1]
            if g in self._cones:
                todo.pop()
                continue
            preds = self._predecessors(g)
            missing = [p for p in preds if p not in self._cones]
            if missing:
                todo.extend(missing)
                continue
            todo.pop()
            n = int(self.lengths[g])
            if not preds:
                self._cones[g] = (frozenset([g]),)
                continue
            levels = []
            for t in range(n):
                s = set()
                for p in preds:
                    s |= self._cones[p][t]
                levels.append(frozenset(s))
            levels.append(frozenset([g]))
            self._cones[g] = tuple(levels)
        return self._cones[h]

    def _predecessors(self, g):
        n = int(self.lengths[g])
        if n == 0:
            return []
        inv = self.presentation.inverse
        out = []
        for x in range(self.adjacency.shape[1]):
            p = int(self.adjacency[g, inv[x]])
            if p >= 0 and self.lengths[p] == n - 1 and p not in out:
                out.append(p)
        return out


def build_ball(R, radius, max_vertices=2_000_000):
    """Breadth-first ball of ``radius`` around the identity."""
    P = R.presentation
    k = P.alphabet.size
    inv = P.inverse
    words = [()]
    index = {(): 0}
    lengths = [0]
    queue = deque([0])
    edges = []
    while queue:
        i = queue.popleft()
        w = words[i]
        row = [-1] * k
        for x in range(k):
            if w and w[-1] == inv[x]:
                v = R.rewrite(w[:-1])
            else:
                v = R.rewrite(w + (x,))
            j = index.get(v)
            if j is None:
                if len(v) > radius:
                    continue
                if len(v) != len(w) + 1:
                    raise InputError(f"ball: rewriting left {P.format(v)} non-geodesic")
                j = index[v] = len(words)
                words.append(v)
                lengths.append(len(v))
                queue.append(j)
                if len(words) > max_vertices:
                    raise ResourceLimitError("ball size cap reached",
                                             {"vertices": len(words), "radius": radius})
            row[x] = j
        edges.append(row)
    return CayleyBall(radius, words, np.array(lengths, dtype=np.int64),
                      np.array(edges, dtype=np.int64).reshape(-1, k), R, index)


def geodesics_between(ball, g, h):
    """All geodesic words from ``g`` to ``h`` (words or ball indices), short-lex ordered."""
    gi = g if isinstance(g, (int, np.integer)) else ball.element(g)
    hi = h if isinstance(h, (int, np.integer)) else ball.element(h)
    if gi is None or hi is None:
        raise InputError("endpoint outside the ball")
    d = ball.distance(gi, hi)
    if d + max(ball.lengths[gi], ball.lengths[hi]) > ball.radius:
        raise InputError("geodesics between these points may leave the ball")
    # distances to h along the ball, limited to depth d
    to_h = {hi: 0}
    frontier = [hi]
    k = ball.adjacency.shape[1]
    for step in range(1, d + 1):
        nxt = []
        for p in frontier:
            for x in range(k):
                q = int(ball.adjacency[p, x])
                if q >= 0 and q not in to_h:
                    to_h[q] = step
                    nxt.append(q)
        frontier = nxt
    out = []

    def extend(p, word):
        left = to_h[p]
        if left == 0:
            out.append(tuple(word))
            return
        for x in range(k):
            q = int(ball.adjacency[p, x])
            if q >= 0 and to_h.get(q, -1) == left - 1:
                word.append(x)
                extend(q, word)
                word.pop()

    extend(gi, [])
    return out


def max_bigon_width(ball):
    """Largest ``d(u(t), v(t))`` over equal-length geodesics ``u, v`` with common ends.

    Geodesics are translated to start at the identity; any vertex at level
    ``t`` of the cone of ``h`` lies on some geodesic to ``h``, so the width at
    ``h`` is the largest distance within one level.  Returns ``(width, h)``.
    """
    if ball.radius < 2:
        raise InputError("bigon width needs radius at least 2")
    best, where = 0, 0
    for h in range(len(ball)):
        for level in ball.cone(h):
            if len(level) < 2:
                continue
            pts = sorted(level)
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    d = ball.distance(pts[a], pts[b])
                    if d > best:
                        best, where = d, h
    return best, ball.words[where]


@dataclass
class ConcreteTriangle:
    a: tuple
    b: tuple
    c: tuple
    u: tuple
    v: tuple
    w: tuple
    rho: tuple
    companion_max: int
    corner: str = ""
    position: int = 0


def _corner_max(L1, L2, rho, distance):
    """Largest companion distance between two sides leaving the same corner.

    ``L1[i]`` and ``L2[i]`` hold the candidate points at distance ``i`` along
    the clockwise and anticlockwise side.  Integer positions up to
    ``floor(rho)`` are compared directly; for a half-integer ``rho`` the
    meeting point is moved to the vertex one step further along the
    clockwise side, matching the differences used by the thinness module.
    """
    n = int(rho)
    best, at = 0, 0
    pairs = [(i, i) for i in range(n + 1)]
    if rho != n:
        pairs.append((n + 1, n))
    for i, j in pairs:
        for p in L1[i]:
            for q in L2[j]:
                d = distance(p, q)
                if d > best:
                    best, at = d, i
    return best, at


def max_triangle_thinness(ball, shortlex_only=True):
    """Largest companion distance over triangles with one vertex at the identity.

    The other two vertices range over the ball of radius ``radius // 2``, so
    all three sides stay inside the ball.  With ``shortlex_only`` the sides
    are short-lex normal forms, otherwise every geodesic is allowed.
    Returns ``(delta_observed, witness)``.
    """
    if ball.radius < 3:
        raise InputError("triangle thinness needs radius at least 3")
    half = ball.radius // 2
    inner = np.flatnonzero(ball.lengths <= half)
    P = ball.presentation
    inv = P.inv
    best = None
    for b in inner:
        wb = ball.words[b]
        for c in inner:
            wc = ball.words[c]
            u = ball.reduce(inv(wb) + wc)
            v = ball.reduce(inv(wc))
            w = wb
            lu, lv, lw = len(u), len(v), len(w)
            ra = Fraction(lv + lw - lu, 2)
            rb = Fraction(lw + lu - lv, 2)
            rc = Fraction(lu + lv - lw, 2)
            # each corner translated to the identity: (clockwise, anticlockwise)
            corners = (("a", w, inv(v), ra), ("b", u, inv(w), rb), ("c", v, inv(u), rc))
            for name, s1, s2, rho in corners:
                if shortlex_only:
                    L1 = [(p,) for p in ball.walk(0, s1)]
                    L2 = [(p,) for p in ball.walk(0, s2)]
                else:
                    L1 = ball.cone(ball.element(s1))
                    L2 = ball.cone(ball.element(s2))
                d, at = _corner_max(L1, L2, rho, ball.distance)
                if best is None or d > best.companion_max:
                    best = ConcreteTriangle((), wb, wc, u, v, w, (ra, rb, rc), d, name, at)
    return best.companion_max, best

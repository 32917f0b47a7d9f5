"""Fellow-traveller distances and the empirical property checkers.

Asynchronous fellow travel is decided on the grid of vertex pairs
``(p(i), q(j))``: the two paths K-fellow travel when a monotone staircase
(steps right, up or diagonal) joins ``(0, 0)`` to ``(len U, len V)``
through pairs at distance at most K. The least such K is a bottleneck
shortest path, computed column by column.

Every constant reported here is empirical: it holds for the words that
were enumerated and for nothing beyond them.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .automata import Dfa
from .group import GroupElement, MarkedAlphabet, Word
from .metric import BallTable, FactorBalls, Metric
from .words import all_words, geodesic_words, minimal_non_geodesics

INF = float("inf")


def path_vertices(W: Word, X: MarkedAlphabet, start: Optional[GroupElement] = None) -> List[GroupElement]:
    mul = X.spec.multiply
    g = X.spec.identity if start is None else start
    out = [g]
    for i in W:
        g = mul(g, X.elements[i])
        out.append(g)
    return out


class _Dist:
    """``d(g, h) = |g^-1 h|`` with values beyond the oracle reported as ``cap``."""

    def __init__(self, metric: Metric):
        self.metric = metric
        self.mul = metric.X.spec.multiply
        self.inv = metric.X.spec.invert
        self.cap = metric.radius + 1

    def __call__(self, g, h):
        return self.of(self.inv(g), h)

    def of(self, g_inv, h):
        """Distance given ``g^-1`` already inverted."""
        k = self.metric.length_or_none(self.mul(g_inv, h))
        return self.cap if k is None else k


def sync_distance(U: Word, V: Word, metric: Metric, g: Optional[GroupElement] = None,
                  h: Optional[GroupElement] = None) -> int:
    """``max_t d(p(t), q(t))`` with each path held at its endpoint once it ends."""
    X = metric.X
    p, q = path_vertices(U, X, g), path_vertices(V, X, h)
    d = _Dist(metric)
    n = max(len(p), len(q))
    return max(d(p[min(t, len(p) - 1)], q[min(t, len(q) - 1)]) for t in range(n))


def _grid(p, q, d):
    return [[d(a, b) for b in q] for a in p]


def _bottleneck(D):
    m, n = len(D), len(D[0])
    best = [[INF] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            if i == 0 and j == 0:
                prev = -INF
            else:
                prev = min(best[i - 1][j] if i else INF,
                           best[i][j - 1] if j else INF,
                           best[i - 1][j - 1] if i and j else INF)
            best[i][j] = max(D[i][j], prev)
    return best


def async_constant(U: Word, V: Word, metric: Metric, g: Optional[GroupElement] = None,
                   h: Optional[GroupElement] = None) -> int:
    """Least K for which the two paths asynchronously K-fellow travel."""
    X = metric.X
    D = _grid(path_vertices(U, X, g), path_vertices(V, X, h), _Dist(metric))
    return int(_bottleneck(D)[-1][-1])


def async_fellow(U: Word, V: Word, K: int, metric: Metric, g=None, h=None) -> bool:
    return async_constant(U, V, metric, g, h) <= K


def staircase(U: Word, V: Word, K: int, metric: Metric, g=None, h=None) -> Optional[List[Tuple[int, int]]]:
    """A monotone path of grid points at distance at most K, or None."""
    X = metric.X
    D = _grid(path_vertices(U, X, g), path_vertices(V, X, h), _Dist(metric))
    best = _bottleneck(D)
    m, n = len(D), len(D[0])
    if best[-1][-1] > K:
        return None
    path = [(m - 1, n - 1)]
    i, j = m - 1, n - 1
    while (i, j) != (0, 0):
        for a, b in ((i - 1, j - 1), (i - 1, j), (i, j - 1)):
            if a >= 0 and b >= 0 and best[a][b] <= K:
                i, j = a, b
                break
        path.append((i, j))
    return path[::-1]


def reparametrizations(path: Sequence[Tuple[int, int]], horizon: int) -> Tuple[List[int], List[int]]:
    """Non-decreasing ``phi, psi`` on ``0..horizon`` read off a staircase.

    ``phi(t)`` is the first column paired with row ``t`` and ``psi(t)``
    the first row paired with column ``t``; both stay at the endpoint
    beyond the end of the path.
    """
    m = path[-1][0]
    n = path[-1][1]
    phi, psi = {}, {}
    for i, j in path:
        phi.setdefault(i, j)
        psi.setdefault(j, i)
    return ([phi[min(t, m)] for t in range(horizon + 1)], [psi[min(t, n)] for t in range(horizon + 1)])


def check_reparametrization(U: Word, V: Word, K: int, metric: Metric, phi, psi, g=None, h=None) -> bool:
    """The two-function definition, checked literally (with endpoint padding)."""
    X = metric.X
    p, q = path_vertices(U, X, g), path_vertices(V, X, h)
    d = _Dist(metric)

    def at(path, t):
        return path[min(t, len(path) - 1)]

    mono = all(a <= b for a, b in zip(phi, phi[1:])) and all(a <= b for a, b in zip(psi, psi[1:]))
    return mono and all(d(at(p, t), at(q, phi[t])) <= K and d(at(p, psi[t]), at(q, t)) <= K
                        for t in range(len(phi)))


# -- FFTP ------------------------------------------------------------------------

@dataclass
class FftpReport:
    constant: Optional[int]
    L_max: int
    K_max: int
    checked: int
    witness: Optional[Tuple[Word, Word]] = None
    rows: List[Tuple[Word, Optional[Word], Optional[int]]] = field(default_factory=list)

    def to_csv(self, X: MarkedAlphabet) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["word", "witness", "constant"])
        for W, V, c in self.rows:
            w.writerow([X.format_word(W), "" if V is None else X.format_word(V), "" if c is None else c])
        return buf.getvalue()

    def summary(self) -> str:
        k = "none" if self.constant is None else str(self.constant)
        return f"fftp K={k} (empirical, L_max={self.L_max}, K_max={self.K_max}, {self.checked} minimal non-geodesics)"


def best_shorter_traveller(W: Word, g: GroupElement, metric: Metric, bound: float):
    """``(constant, V)`` minimising the asynchronous constant over words V with
    ``len(V) < len(W)`` and ``V = g``, among those below ``bound``; ``(INF, None)`` if none.

    Depth-first over V with the staircase table grown one column per
    letter; a branch dies once every entry of its column reaches the bound
    or once ``g`` is out of reach.
    """
    X = metric.X
    mul, inv = X.spec.multiply, X.spec.invert
    d = _Dist(metric)
    p = path_vertices(W, X)
    m = len(p)
    n_max = len(W) - 1
    length = metric.length_or_none
    inv_g = inv(g)
    best = [bound, None]
    word: List[int] = []

    def column(prev_col, q):
        col = []
        for i in range(m):
            cand = min(prev_col[i], prev_col[i - 1] if i else INF, col[i - 1] if i else INF)
            col.append(max(d(p[i], q), cand))
        return col

    first = []
    for i in range(m):
        first.append(max(d(p[i], X.spec.identity), first[i - 1] if i else -INF))

    def rec(q, col):
        if min(col) >= best[0]:
            return
        if q == g and col[-1] < best[0]:
            best[0], best[1] = col[-1], tuple(word)
        if len(word) == n_max:
            return
        for a, x in enumerate(X.elements):
            r = mul(q, x)
            k = length(mul(inv(r), g))
            if k is None or k > n_max - len(word) - 1:
                continue
            word.append(a)
            rec(r, column(col, r))
            word.pop()

    rec(X.spec.identity, first)
    return best[0], best[1]


def fftp_report(X: MarkedAlphabet, ball: BallTable, L_max: int = 8, K_max: int = 8,
                factor_balls: Optional[FactorBalls] = None) -> FftpReport:
    metric = Metric(X, ball, factor_balls)
    current = 0
    rows = []
    witness = None
    checked = 0
    for W, g in minimal_non_geodesics(metric, L_max):
        checked += 1
        c, V = best_shorter_traveller(W, g, metric, current + 1)
        if V is None:
            c, V = best_shorter_traveller(W, g, metric, K_max + 1)
            if V is None:
                rows.append((W, None, None))
                return FftpReport(None, L_max, K_max, checked, (W, ()), rows)
            current = int(c)
            witness = (W, V)
        rows.append((W, V, int(c)))
    return FftpReport(current, L_max, K_max, checked, witness, rows)


def fftp_constant(X: MarkedAlphabet, ball: BallTable, L_max: int = 8, K_max: int = 8) -> Optional[int]:
    """Least K <= K_max falsifying every non-geodesic of length <= L_max, or None.

    Minimal non-geodesics suffice: any non-geodesic contains one, and
    replacing it inside the word keeps the same fellow-travel constant.
    """
    if ball.radius < L_max:
        from .metric import build_ball

        ball = build_ball(X, L_max, start=ball)
    return fftp_report(X, ball, L_max, K_max).constant


# -- language properties -----------------------------------------------------------

@dataclass
class PropertyReport:
    name: str
    ok: bool
    constant: Optional[float] = None
    bound: int = 0
    checked: int = 0
    detail: str = ""
    witness: Optional[tuple] = None
    rows: List[tuple] = field(default_factory=list)

    def summary(self) -> str:
        c = "" if self.constant is None else f" M={self.constant:g}"
        status = "ok" if self.ok else "FAILED"
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.name} {status}{c} (empirical, bound={self.bound}, {self.checked} cases){tail}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["word", "witness", "constant"])
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()


def _as_predicate(L, local=None):
    if isinstance(L, Dfa):
        if local is None:
            return L.accepts
        return lambda W: L.accepts(local[x] for x in W)
    return L


def check_L1(L, omega: int, X: MarkedAlphabet, factor_balls: FactorBalls, radius: int = 4) -> PropertyReport:
    """(L1) for ``L`` over ``X ∩ H_omega``: geodesic words only, every element represented.

    ``L`` is a DFA over the factor sub-alphabet or a predicate on sub-alphabet words.
    """
    sub, idx = factor_balls.subalphabets[omega]
    fball = factor_balls.ball(omega, radius)
    member = _as_predicate(L)
    seen = set()
    checked = 0
    for n in range(radius + 1):
        for W in all_words(sub, n):
            if not member(W):
                continue
            checked += 1
            g = sub.evaluate(W)
            if fball.lengths.get(g) != n:
                return PropertyReport("L1", False, bound=radius, checked=checked,
                                      detail=f"non-geodesic word {sub.format_word(W)!r}", witness=(W,))
            seen.add(g)
    for g in fball.elements(radius):
        if g not in seen:
            return PropertyReport("L1", False, bound=radius, checked=checked,
                                  detail=f"no representative of {g}", witness=(g,))
    return PropertyReport("L1", True, bound=radius, checked=checked)


def language_words(L: Callable[[Word], bool], metric: Metric, bound: int):
    """Words of a geodesic language up to ``bound`` (enumerated via geodesic prefixes)."""
    for W, g in geodesic_words(metric, bound):
        if L(W):
            yield W, g


def _rep_finder(L, metric: Metric, representatives=None):
    """Words of L for an element: the supplied function, else filtered geodesics (memoised)."""
    if representatives is not None:
        return representatives
    memo = {}

    def find(g):
        r = memo.get(g)
        if r is None:
            r = memo[g] = [U for U in metric.geodesics(g) if L(U)]
        return r

    return find


def _L_quantified(L, metric: Metric, bound: int, M: Optional[float], universal: bool,
                  representatives=None) -> PropertyReport:
    X = metric.X
    mul = X.spec.multiply
    shifts = [(None, X.spec.identity)] + list(enumerate(X.elements))
    worst = 0.0
    witness = None
    checked = 0
    rows = []
    name = "Lforall" if universal else "Lexists"
    reps_of = _rep_finder(L, metric, representatives)
    for W, w in language_words(L, metric, bound):
        for gi, g in shifts:
            gw = mul(g, w)
            for hi, h in shifts:
                scale = (gi is not None) + (hi is not None)
                target = mul(gw, h)
                reps = reps_of(target)
                if not reps:
                    return PropertyReport(name, False, bound=bound, checked=checked,
                                          detail=f"no word of L represents g*W*h for W={X.format_word(W)!r}")
                consts = [async_constant(U, W, metric, None, g) for U in reps]
                c = max(consts) if universal else min(consts)
                checked += 1
                ratio = (0.0 if c == 0 else INF) if scale == 0 else c / scale
                if ratio > worst:
                    worst = ratio
                    k = consts.index(c)
                    witness = (W, gi, hi, reps[k])
                    rows.append((X.format_word(W), X.format_word(reps[k]), c))
    ok = worst < INF and (M is None or worst <= M)
    detail = "" if ok else (f"observed M={worst:g} exceeds {M}" if worst < INF else "distinct representatives of one element")
    return PropertyReport(name, ok, worst, bound, checked, detail, witness, rows)


def check_Lforall(L, metric: Metric, bound: int, M: Optional[float] = None,
                  representatives=None) -> PropertyReport:
    """Every ``U ∈ L`` with ``U = gWh`` (g, h in X ∪ {1}) asynchronously M(|g|+|h|)-fellow travels W.

    U is read from 1 and W from g. The reported constant is the largest
    observed ratio; the ``g = h = 1`` cases must give 0 outright.
    ``representatives(g)``, when given, lists the words of L for g.
    """
    return _L_quantified(_as_predicate(L), metric, bound, M, True, representatives)


def check_Lexists(L, metric: Metric, bound: int, M: Optional[float] = None,
                  representatives=None) -> PropertyReport:
    """Some ``U ∈ L`` with ``U = gWh`` asynchronously M(|g|+|h|)-fellow travels W."""
    return _L_quantified(_as_predicate(L), metric, bound, M, False, representatives)


def biautomatic_fellow_check(L, metric: Metric, bound: int, representatives=None) -> PropertyReport:
    """Largest synchronous distance between W (from x) and U (from 1), U = xWy in L.

    W runs over L up to ``bound`` and x, y over ``X ∪ {1}``.
    """
    L = _as_predicate(L)
    reps_of = _rep_finder(L, metric, representatives)
    X = metric.X
    mul = X.spec.multiply
    shifts = [(None, X.spec.identity)] + list(enumerate(X.elements))
    worst = 0
    witness = None
    checked = 0
    rows = []
    inv = X.spec.invert
    dist = _Dist(metric)
    upaths = {}
    for W, w in language_words(L, metric, bound):
        for xi, x in shifts:
            xw = mul(x, w)
            q = path_vertices(W, X, x)
            for yi, y in shifts:
                for U in reps_of(mul(xw, y)):
                    checked += 1
                    p = upaths.get(U)
                    if p is None:
                        p = upaths[U] = [inv(v) for v in path_vertices(U, X)]
                    n = max(len(p), len(q))
                    c = max(dist.of(p[min(t, len(p) - 1)], q[min(t, len(q) - 1)]) for t in range(n))
                    if c > worst:
                        worst = c
                        witness = (W, xi, yi, U)
                        rows.append((X.format_word(W), X.format_word(U), c))
    return PropertyReport("biauto", True, worst, bound, checked, "", witness, rows)

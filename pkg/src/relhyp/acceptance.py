"""The eight acceptance checks, shared by ``relhyp verify all`` and the test suite.

Each check returns a :class:`CriterionResult`; thresholds are arguments so
the test suite can pin them explicitly. A :class:`Context` caches balls and
constants between checks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import automata as au
from . import catalog
from .conjugacy import ConjugacySolver, bcd_report, bench, build_phi, class_key, min_conj_length
from .fellow import biautomatic_fellow_check, fftp_report
from .langmach import (
    factor_shortlex_languages,
    geo_rel_automaton,
    geo_rel_decider,
    is_cyclic_geodesic,
    ns_automaton,
    rel_decider,
    rel_language,
    rel_normal_form,
)
from .metric import FactorBalls, Metric, build_ball, sphere_counts
from .series import RationalSeries, growth_series
from .words import words_upto


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.name}; {self.detail} [{self.seconds:.1f}s]"


class Context:
    """Shared balls, metrics and FFTP constants keyed by test-group name."""

    FFTP_L_MAX = 8
    FFTP_K_MAX = 8

    def __init__(self):
        self._metrics: Dict[Tuple[str, int], Metric] = {}
        self._fftp: Dict[str, object] = {}

    def alphabet(self, name: str):
        return catalog.by_name(name)

    def metric(self, name: str, radius: int) -> Metric:
        for (n, r), m in self._metrics.items():
            if n == name and r >= radius:
                return m
        X = self.alphabet(name)
        prev = max((r for n, r in self._metrics if n == name), default=None)
        start = self._metrics[(name, prev)].ball if prev is not None else None
        ball = build_ball(X, radius, start=start)
        fb = FactorBalls(X, radius) if X.is_parabolic else None
        m = Metric(X, ball, fb)
        self._metrics[(name, radius)] = m
        return m

    def fftp(self, name: str):
        """The ``--fftp-C auto`` report (L_max = 8, K_max = 8)."""
        if name not in self._fftp:
            m = self.metric(name, self.FFTP_L_MAX)
            self._fftp[name] = fftp_report(m.X, m.ball, self.FFTP_L_MAX, self.FFTP_K_MAX)
        return self._fftp[name]


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _all_words_with_elements(X, n):
    """Every word of length at most ``n`` with its element, depth first."""
    mul, elems = X.spec.multiply, X.elements
    word: List[int] = []

    def rec(g):
        yield tuple(word), g
        if len(word) == n:
            return
        for i, x in enumerate(elems):
            word.append(i)
            yield from rec(mul(g, x))
            word.pop()

    yield from rec(X.spec.identity)


# -- 1 -----------------------------------------------------------------------------

def geodesic_acceptor_equivalence(ctx: Context, name: str, extra: int = 4,
                                  time_limit: float = 60.0) -> CriterionResult:
    """ns_automaton with the auto constant against is_geodesic on all words up to 2C + extra.

    The clock covers the constant search, the construction and the sweep.
    """
    t0 = time.perf_counter()
    rep = ctx.fftp(name)
    C = rep.constant
    if C is None:
        return CriterionResult(1, name, False, "no FFTP constant found", time.perf_counter() - t0)
    n = 2 * C + extra
    m = ctx.metric(name, max(n, 2 * C + 1))
    X = m.X
    A = ns_automaton(X, C, m.ball)
    table, start, accept = A.table, A.start, A.accept
    mul, elems = X.spec.multiply, X.elements
    lengths = m.ball.lengths
    mismatches = 0
    checked = 0
    # walk all words carrying the DFA state and the element together
    stack = [(start, X.spec.identity, 0)]
    while stack:
        q, g, depth = stack.pop()
        checked += 1
        if (q in accept) != (lengths[g] == depth):
            mismatches += 1
        if depth < n:
            row = table[q]
            stack.extend((row[i], mul(g, x), depth + 1) for i, x in enumerate(elems))
    elapsed = time.perf_counter() - t0
    detail = f"C={C}, words up to length {n}: {checked}, mismatches {mismatches}, {elapsed:.1f}s (limit {time_limit:g}s)"
    return CriterionResult(1, name, mismatches == 0 and elapsed < time_limit, detail, elapsed,
                           {"C": C, "n": n, "checked": checked, "mismatches": mismatches, "states": A.n_states})


# -- 2 -----------------------------------------------------------------------------

EXPECTED_SERIES = {
    "Z": RationalSeries.reduced((1, 1), (1, -1)),
    "Z2": RationalSeries.reduced((1, 2, 1), (1, -2, 1)),
    "F2": RationalSeries.reduced((1, 1), (1, -3)),
}


def normal_form_dfa(ctx: Context, name: str):
    """Minimal DFA for Geo ∩ Rel(X, {ShortLex factors}), with Geo from the auto constant."""
    C = ctx.fftp(name).constant
    m = ctx.metric(name, 2 * C + 1)
    geo = ns_automaton(m.X, C, m.ball)
    fb = m.factor_balls or FactorBalls(m.X, 8)
    return geo_rel_automaton(m.X, geo, fb)


@_timed
def growth_series_check(ctx: Context, name: str, n_max: int = 10) -> CriterionResult:
    A = normal_form_dfa(ctx, name)
    S = growth_series(A)
    if name in EXPECTED_SERIES:
        ok = S == EXPECTED_SERIES[name]
        detail = f"{S} (expected {EXPECTED_SERIES[name]})"
    else:
        truth = sphere_counts(ctx.alphabet(name), n_max)
        got = S.coefficients(n_max)
        ok = got == truth and au.count_sequence(A, n_max) == truth
        detail = f"{S}; coefficients to n={n_max} {'match' if ok else 'differ from'} BFS spheres {truth}"
    return CriterionResult(2, name, ok, detail, data={"series": str(S), "states": A.n_states})


# -- 3 -----------------------------------------------------------------------------

@_timed
def rel_construction_check(ctx: Context, name: str = "Z2*Z", n: int = 6) -> CriterionResult:
    m = ctx.metric(name, n)
    X = m.X
    fb = m.factor_balls or FactorBalls(X, n)
    L = factor_shortlex_languages(X, fb)
    R = rel_language(X, L, fb)
    direct = rel_decider(X, L)
    mismatches = 0
    checked = 0
    for W in words_upto(X, n):
        checked += 1
        if R.accepts(W) != direct(W):
            mismatches += 1
    return CriterionResult(3, name, mismatches == 0,
                           f"{checked} words up to length {n}, mismatches {mismatches}, Rel DFA {R.n_states} states",
                           data={"checked": checked, "mismatches": mismatches})


# -- 4 -----------------------------------------------------------------------------

@_timed
def conjugacy_soundness_check(ctx: Context, name: str, n: int = 5, phi_len: int = 6,
                              bcd_len: int = 6) -> CriterionResult:
    """Every pair of words up to length ``n``.

    ``decide`` depends on U and V only through their cyclic reductions, and
    its conjugator is ``c_U * T * c_V^-1`` with ``T`` computed from the reduced
    pair. So the sweep checks each word's reduction once (conjugator and
    class) and then runs ``decide`` on every pair of distinct reductions,
    which covers every pair of input words.
    """
    m = ctx.metric(name, max(phi_len, bcd_len, 8))
    X = m.X
    spec = X.spec
    B = bcd_report(X, m, bcd_len, bcd_len).constant
    if B is None:
        return CriterionResult(4, name, False, "no BCD constant for the bound B")
    phi = build_phi(X, m, phi_len)
    solver = ConjugacySolver(X, m, phi, B)
    bad_reductions = 0
    reps: Dict[tuple, tuple] = {}
    n_words = 0
    for W, w in _all_words_with_elements(X, n):
        n_words += 1
        red = solver.prepare(W).reduced
        r = X.evaluate(red.word)
        if spec.conjugate(w, X.evaluate(red.conjugator)) != r or len(red.word) > len(W) \
                or class_key(w, spec) != class_key(r, spec) or (w.is_identity != (red.word == ())):
            bad_reductions += 1
        reps.setdefault(red.word, r)
    R = sorted(reps)
    keys = {U: class_key(reps[U], spec) for U in R}
    mismatches = 0
    pairs = 0
    positives = 0
    for U in R:
        u = reps[U]
        for V in R:
            pairs += 1
            verdict = solver.decide(U, V)
            truth = keys[U] == keys[V]
            if verdict.conjugate != truth:
                mismatches += 1
            elif truth:
                positives += 1
                if spec.conjugate(u, X.evaluate(verdict.conjugator)) != reps[V]:
                    mismatches += 1
    # spot-check the composed conjugator on raw inputs
    raw = list(words_upto(X, min(n, 3)))
    for U in raw:
        for V in raw:
            v = solver.decide(U, V)
            gu, gv = X.evaluate(U), X.evaluate(V)
            truth = class_key(gu, spec) == class_key(gv, spec)
            if v.conjugate != truth or (truth and spec.conjugate(gu, X.evaluate(v.conjugator)) != gv):
                mismatches += 1
    ok = mismatches == 0 and bad_reductions == 0
    detail = (f"B={B}, |Φ|={len(phi)}, {n_words} words -> {len(R)} reductions (bad {bad_reductions}); "
              f"{pairs} reduced pairs ({positives} conjugate), mismatches {mismatches}")
    return CriterionResult(4, name, ok, detail, data={"B": B, "pairs": pairs, "mismatches": mismatches})


# -- 5 -----------------------------------------------------------------------------

@_timed
def cubic_time_check(ctx: Context, sizes=(50, 100, 200, 400), trials: int = 3, seed: int = 0,
                     max_exponent: float = 3.3) -> CriterionResult:
    name = "F2+t"
    m = ctx.metric(name, 8)
    X = m.X
    B = bcd_report(X, m, 6, 6).constant
    phi = build_phi(X, m, 6)
    solver = ConjugacySolver(X, m, phi, B)
    res = bench(solver, sizes, trials=trials, seed=seed, verify=True)
    times = ", ".join(f"n={n}: {s * 1000:.1f}ms" for n, s in zip(res.sizes, res.seconds))
    ok = res.exponent <= max_exponent
    return CriterionResult(5, name, ok, f"fitted exponent {res.exponent:.2f} (limit {max_exponent}); {times}",
                           data={"exponent": res.exponent, "bench": res})


# -- 6 -----------------------------------------------------------------------------

@_timed
def property_constants_check(ctx: Context, bcd_groups=("Z2", "F2"), bcd_len: int = 6,
                             fftp_limit: int = 2) -> CriterionResult:
    parts = []
    ok = True
    for name in bcd_groups:
        m = ctx.metric(name, bcd_len)
        k = bcd_report(m.X, m, bcd_len, bcd_len).constant
        ok &= k == 0
        parts.append(f"bcd {name}={k}")
    for name in catalog.TEST_GROUPS:
        K = ctx.fftp(name).constant
        ok &= K is not None and K <= fftp_limit
        parts.append(f"fftp {name}={K}")
    return CriterionResult(6, ", ".join(bcd_groups) + " / all", ok,
                           "; ".join(parts) + f" (bcd at L_max={bcd_len}, fftp at L_max={Context.FFTP_L_MAX})")


# -- 7 -----------------------------------------------------------------------------

@_timed
def language_chain_check(ctx: Context, name: str, n: int = 6) -> CriterionResult:
    m = ctx.metric(name, n)
    X = m.X
    lengths = m.ball.lengths
    counts = [0, 0, 0]
    violations = 0
    for W, g in _all_words_with_elements(X, n):
        geo = lengths[g] == len(W)
        cyc = geo and is_cyclic_geodesic(W, m)
        conj = len(W) == min_conj_length(g, m)
        if conj and not is_cyclic_geodesic(W, m):
            violations += 1
        if cyc and not geo:
            violations += 1
        counts[0] += geo
        counts[1] += cyc
        counts[2] += conj
    return CriterionResult(7, name, violations == 0,
                           f"to length {n}: |Geo|={counts[0]}, |CycGeo|={counts[1]}, |ConjGeo|={counts[2]}, "
                           f"violations {violations}", data={"counts": counts})


# -- 8 -----------------------------------------------------------------------------

@_timed
def fellow_report_check(ctx: Context, name: str = "Z2*Z", bounds=(4, 5, 6)) -> CriterionResult:
    m = ctx.metric(name, max(bounds) + 2)
    X = m.X
    fb = m.factor_balls
    L = geo_rel_decider(m, fb)
    reps = rel_normal_form(X, fb)
    Ms = []
    for b in bounds:
        Ms.append(biautomatic_fellow_check(L, m, b, representatives=reps).constant)
    finite = all(M is not None and M != float("inf") for M in Ms)
    ratios = [M / b for M, b in zip(Ms, bounds)] if finite else []
    stable = finite and all(r2 <= r1 for r1, r2 in zip(ratios, ratios[1:]))
    detail = ", ".join(f"bound {b}: M={M}" for b, M in zip(bounds, Ms))
    if ratios:
        detail += "; M/bound " + " >= ".join(f"{r:.3f}" for r in ratios)
    return CriterionResult(8, name, finite and stable, detail, data={"M": Ms})


# -- driver ----------------------------------------------------------------------------

def run_all(ctx: Optional[Context] = None, emit: Callable[[str], None] = print,
            max_len: Optional[int] = None) -> List[CriterionResult]:
    """Run every criterion and emit one summary line each (sub-results are folded in)."""
    ctx = ctx or Context()
    out = []

    def fold(number, name, results):
        ok = all(r.passed for r in results)
        detail = " | ".join(f"{r.name}: {r.detail}" for r in results)
        res = CriterionResult(number, name, ok, detail, sum(r.seconds for r in results))
        emit(res.line())
        out.append(res)

    n = {} if max_len is None else {"n": max_len}
    fold(1, "geodesic-acceptor equivalence",
         [geodesic_acceptor_equivalence(ctx, g) for g in catalog.TEST_GROUPS])
    fold(2, "growth series", [growth_series_check(ctx, g) for g in ("Z", "Z2", "F2", "Z2*Z")])
    fold(3, "Rel construction", [rel_construction_check(ctx, **n)])
    fold(4, "conjugacy soundness", [conjugacy_soundness_check(ctx, g, **({} if max_len is None else {"n": min(max_len, 5)}))
                                    for g in ("F2", "F2+t")])
    fold(5, "cubic-time claim", [cubic_time_check(ctx)])
    fold(6, "property constants", [property_constants_check(ctx)])
    fold(7, "language chain", [language_chain_check(ctx, g, **n) for g in catalog.TEST_GROUPS])
    fold(8, "fellow-traveller reports", [fellow_report_check(ctx)])
    return out

"""Conjugacy: the exact free-product oracle, the reducing algorithm, the
bounded conjugator search, and the BCD / NSC sweeps.

Conventions: a conjugator ``c`` of ``g`` to ``h`` satisfies ``c^-1 g c = h``,
for elements and words alike. Rotating a word ``W`` left by ``i`` letters
gives ``P^-1 W P`` with ``P = W[:i]``, so ``P`` is its conjugator.
"""

from __future__ import annotations

import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import OutOfRangeError, PreconditionError, SoundnessAlert
from .factorize import factorize, has_parabolic_shortening
from .group import GroupElement, GroupSpec, MarkedAlphabet, Word
from .metric import FactorBalls, Metric
from .words import geodesic_words, minimal_non_geodesics


# -- exact oracle ------------------------------------------------------------------

def cyclic_reduce_element(g: GroupElement, spec: GroupSpec) -> Tuple[GroupElement, GroupElement]:
    """``(r, c)`` with ``r = c^-1 g c`` cyclically reduced (first and last syllables in different factors)."""
    c = spec.identity
    while len(g.syllables) >= 2 and g.syllables[0][0] == g.syllables[-1][0]:
        s = GroupElement(g.syllables[:1])
        g = spec.conjugate(g, s)
        c = spec.multiply(c, s)
    return g, c


def _rotations(r: GroupElement):
    s = r.syllables
    return [s[i:] + s[:i] for i in range(len(s))]


def class_key(g: GroupElement, spec: GroupSpec) -> tuple:
    """A complete conjugacy invariant: the least rotation of the cyclically reduced syllables."""
    r, _ = cyclic_reduce_element(g, spec)
    if len(r.syllables) <= 1:
        return r.syllables
    return min(_rotations(r))


def conjugate_exact(g: GroupElement, h: GroupElement, spec: GroupSpec) -> Optional[GroupElement]:
    """A conjugator ``c`` with ``c^-1 g c = h``, or None.

    Cyclically reduced forms of conjugate elements are rotations of each
    other, except that a single syllable is conjugate only to itself
    since the factors are abelian.
    """
    rg, cg = cyclic_reduce_element(g, spec)
    rh, ch = cyclic_reduce_element(h, spec)
    mul, inv = spec.multiply, spec.invert
    if len(rg.syllables) <= 1 or len(rh.syllables) <= 1:
        if rg != rh:
            return None
        return mul(cg, inv(ch))
    if len(rg.syllables) != len(rh.syllables):
        return None
    s = rg.syllables
    for i in range(len(s)):
        if s[i:] + s[:i] == rh.syllables:
            P = GroupElement(s[:i])
            return mul(mul(cg, P), inv(ch))
    return None


def are_conjugate(g: GroupElement, h: GroupElement, spec: GroupSpec) -> bool:
    return class_key(g, spec) == class_key(h, spec)


def min_conj_length(g: GroupElement, metric: Metric) -> int:
    """Least X-length in the conjugacy class of ``g``.

    Parabolic alphabets: the syllable lengths of the cyclic reduction add
    up. Otherwise the ball is scanned once per metric for the shortest
    element of each class; the class of ``g`` is then found there provided
    ``|g|`` is within the ball.
    """
    X = metric.X
    spec = X.spec
    if X.is_parabolic:
        fb = metric.factor_balls or FactorBalls(X, radius=2)
        r, _ = cyclic_reduce_element(g, spec)
        return sum(fb.length(GroupElement((s,))) for s in r.syllables)
    table = getattr(metric, "_class_min", None)
    if table is None:
        table = {}
        for n, sphere in enumerate(metric.ball.spheres):
            for h in sphere:
                table.setdefault(class_key(h, spec), n)
        metric._class_min = table
    if metric.length_or_none(g) is None:
        raise OutOfRangeError(f"{g} lies outside the radius-{metric.radius} ball")
    return table[class_key(g, spec)]


def element_word(g: GroupElement, metric: Metric) -> Word:
    """A geodesic word for ``g`` when the ball reaches it, else syllable by syllable."""
    if metric.ball is not None and g in metric.ball.lengths:
        return metric.geodesic_word(g)
    fb = metric.factor_balls or FactorBalls(metric.X, radius=2)
    out: List[int] = []
    for s in g.syllables:
        if s[0] not in fb:
            raise OutOfRangeError(f"no letters of X in factor {s[0]} to spell {g}")
        out.extend(fb.geodesic_word(GroupElement((s,))))
    return tuple(out)


# -- the reducing algorithm ----------------------------------------------------------

@dataclass
class PhiSet:
    """Non-geodesic words to be rewritten, complete for lengths up to ``bound``."""

    words: Dict[Word, Word]
    bound: int

    def __contains__(self, W):
        return tuple(W) in self.words

    def __len__(self):
        return len(self.words)

    @property
    def max_len(self) -> int:
        return max((len(W) for W in self.words), default=0)


def build_phi(X: MarkedAlphabet, metric: Metric, L_max: int,
              factor_balls: Optional[FactorBalls] = None) -> PhiSet:
    """Minimal non-geodesics of length at most ``L_max`` without a parabolic shortening.

    Each maps to the lex-least geodesic of its element.
    """
    if L_max > metric.radius:
        raise OutOfRangeError(f"L_max={L_max} exceeds ball radius {metric.radius}")
    fb = factor_balls or metric.factor_balls or FactorBalls(X, radius=L_max)
    words = {}
    for W, g in minimal_non_geodesics(metric, L_max):
        if has_parabolic_shortening(factorize(W, X), X, fb):
            continue
        words[W] = metric.geodesic_word(g)
    return PhiSet(words, L_max)


@dataclass
class ReduceResult:
    word: Word
    conjugator: Word = ()
    steps: int = 0
    warnings: List[str] = field(default_factory=list)


class Reducer:
    """Stack rewriting by parabolic shortenings and Φ replacements.

    The word is pushed one letter at a time. The stack never contains a
    shortening or a Φ-subword, so only the block and the windows ending at
    the top need checking after each push. Replacements are pushed back one
    letter at a time, and every rewrite shortens the word.
    """

    def __init__(self, X: MarkedAlphabet, phi: PhiSet, factor_balls: FactorBalls):
        self.X = X
        self.phi = phi
        self.fb = factor_balls
        self.window = range(2, phi.max_len + 1)
        self.tags = X.tags
        self.elems = X.elements
        self.mul = X.spec.multiply

    def linear(self, W: Sequence[int]) -> Tuple[Word, int]:
        tags, elems, mul = self.tags, self.elems, self.mul
        words = self.phi.words
        fb = self.fb
        stack: List[int] = []
        run: List[int] = []          # start index of the block containing each position
        block: List[GroupElement] = []  # block element up to each position (tagged letters only)
        pending = list(reversed(W))
        steps = 0
        while pending:
            x = pending.pop()
            t = tags[x]
            n = len(stack)
            if t is not None and n and tags[stack[-1]] == t:
                start = run[-1]
                b = mul(block[-1], elems[x])
                stack.append(x)
                run.append(start)
                block.append(b)
                if fb.length(b) < n + 1 - start:
                    steps += 1
                    del stack[start:], run[start:], block[start:]
                    pending.extend(reversed(fb.geodesic_word(b)))
                    continue
            else:
                stack.append(x)
                run.append(n)
                block.append(elems[x] if t is not None else None)
            top = len(stack)
            for k in self.window:
                if k > top:
                    break
                rep = words.get(tuple(stack[top - k:]))
                if rep is not None:
                    steps += 1
                    del stack[top - k:], run[top - k:], block[top - k:]
                    pending.extend(reversed(rep))
                    break
        return tuple(stack), steps

    def cyclic(self, W: Sequence[int]) -> ReduceResult:
        """Reduce ``W`` up to conjugacy until no rotation admits a rewrite.

        Every rotation is tried for short words. For longer ones a problem
        in some rotation must straddle the wrap point of the clean linear
        word, so rotating to the start of the wrap-around block, and by
        half the length, exposes it.
        """
        W, steps = self.linear(W)
        conj: List[int] = []
        L = self.phi.max_len
        while len(W) > 1:
            n = len(W)
            if n <= 2 * L + 1:
                shifts = range(1, n)
            else:
                shifts = sorted({self._wrap_block_start(W), n // 2} - {0})
            for i in shifts:
                R, s = self.linear(W[i:] + W[:i])
                if len(R) < n:
                    conj.extend(W[:i])
                    W, steps = R, steps + s + 1
                    break
            else:
                break
        res = ReduceResult(W, tuple(conj), steps)
        return res

    def _wrap_block_start(self, W: Word) -> int:
        t = self.tags[W[0]]
        if t is None or self.tags[W[-1]] != t:
            return 0
        i = len(W)
        while i > 0 and self.tags[W[i - 1]] == t:
            i -= 1
        return i % len(W)


def _factor_balls(metric: Metric) -> FactorBalls:
    fb = metric.factor_balls
    if fb is None:
        fb = getattr(metric, "_fb", None)
        if fb is None:
            fb = metric._fb = FactorBalls(metric.X, radius=4)
    return fb


def reduce(W: Word, X: MarkedAlphabet, metric: Metric, phi: PhiSet, cyclic: bool = True) -> ReduceResult:
    r = Reducer(X, phi, _factor_balls(metric))
    if cyclic:
        res = r.cyclic(tuple(W))
    else:
        w, s = r.linear(tuple(W))
        res = ReduceResult(w, (), s)
    if len(W) > phi.bound:
        res.warnings.append(f"incomplete-phi: input length {len(W)} exceeds Φ bound {phi.bound}")
    return res


# -- decision ------------------------------------------------------------------------

@dataclass
class ConjugacyVerdict:
    conjugate: bool
    conjugator: Optional[Word]
    reduced: Tuple[Word, Word]
    bound: int
    method: str
    steps: int = 0
    warnings: List[str] = field(default_factory=list)

    def summary(self, X: MarkedAlphabet) -> str:
        if self.conjugate:
            head = f"conjugate, conjugator={X.format_word(self.conjugator) or '1'}"
        else:
            head = "not conjugate"
        ru, rv = (X.format_word(w) or "1" for w in self.reduced)
        lines = [head, f"reduced: {ru} | {rv}", f"method: {self.method}; B={self.bound} (empirical); rewrites={self.steps}"]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def rotation_elements(W: Word, X: MarkedAlphabet) -> List[GroupElement]:
    """Elements of the rotations of ``W``, as ``P_i^-1 w P_i``."""
    spec = X.spec
    mul, inv = spec.multiply, spec.invert
    w = X.evaluate(W)
    out = []
    p = spec.identity
    for i in range(max(1, len(W))):
        out.append(mul(mul(inv(p), w), p))
        if W:
            p = mul(p, X.elements[W[i]])
    return out


@dataclass
class _Prepared:
    reduced: ReduceResult
    rotations: Tuple[Word, ...]
    inverse_rotations: Tuple[Word, ...]
    elements: List[GroupElement]
    where: Dict[GroupElement, List[int]]


class ConjugacySolver:
    """Reusable state for many decisions over one alphabet."""

    def __init__(self, X: MarkedAlphabet, metric: Metric, phi: PhiSet, B: int, cache_size: int = 200_000):
        if B > metric.radius:
            raise OutOfRangeError(f"B={B} exceeds ball radius {metric.radius}")
        self.X = X
        self.metric = metric
        self.phi = phi
        self.B = B
        self.reducer = Reducer(X, phi, _factor_balls(metric))
        self.spec = X.spec
        inv = X.inverse
        self.inverse_letter = inv
        self.candidates: List[Word] = [C for n in range(B + 1) for C in product(range(len(X)), repeat=n)]
        self.cache_size = cache_size
        self._cache: Dict[Word, _Prepared] = {}
        self._cands = None

    def _inv_word(self, W: Word) -> Word:
        inv = self.inverse_letter
        return tuple(inv[x] for x in reversed(W))

    def _rotation_elements(self, W: Word) -> List[GroupElement]:
        return rotation_elements(W, self.X)

    def prepare(self, W: Word):
        """Cyclic reduction of ``W`` and the rotation data the search needs (cached)."""
        W = tuple(W)
        hit = self._cache.get(W)
        if hit is not None:
            return hit
        red = self.reducer.cyclic(W)
        R = red.word
        n = max(1, len(R))
        rots = tuple(R[i:] + R[:i] for i in range(n))
        elems = self._rotation_elements(R)
        where: Dict[GroupElement, List[int]] = defaultdict(list)
        for j, e in enumerate(elems):
            where[e].append(j)
        prep = _Prepared(red, rots, tuple(self._inv_word(r) for r in rots), elems, dict(where))
        if len(self._cache) >= self.cache_size:
            self._cache.clear()
        self._cache[W] = prep
        return prep

    def decide(self, U: Word, V: Word, prefilter: bool = True, verify: bool = False) -> ConjugacyVerdict:
        X, spec = self.X, self.spec
        U, V = tuple(U), tuple(V)
        pu, pv = self.prepare(U), self.prepare(V)
        ru, rv = pu.reduced, pv.reduced
        Ur, Vr = ru.word, rv.word
        steps = ru.steps + rv.steps
        warnings = []
        if max(len(U), len(V)) > self.phi.bound:
            warnings.append(f"incomplete-phi: input length {max(len(U), len(V))} exceeds Φ bound {self.phi.bound}")
        B = self.B
        tail = None
        if len(Ur) <= B and len(Vr) <= B:
            method = "ball lookup"
            ur, vr = pu.elements[0], pv.elements[0]
            if class_key(ur, spec) == class_key(vr, spec):
                c = conjugate_exact(ur, vr, spec)
                tail = element_word(c, self.metric)
        else:
            method = "bounded conjugator search" + ("" if prefilter else " (direct)")
            hit = self._search(pu, pv, prefilter)
            if hit is not None:
                C, i, j = hit
                tail = Ur[:i] + self._inv_word(C) + self._inv_word(Vr[:j])
        conj = None
        if tail is not None:
            conj = ru.conjugator + tail + self._inv_word(rv.conjugator)
        verdict = ConjugacyVerdict(conj is not None, conj, (Ur, Vr), B, method, steps, warnings)
        if verify:
            self._verify(U, V, verdict)
        return verdict

    def _search(self, pu: "_Prepared", pv: "_Prepared", prefilter: bool):
        """First ``(C, i, j)`` in (length, lex) x i x j order with ``C U_i C^-1 V_j^-1`` reducing to 1.

        The prefilter only skips triples whose word is a nontrivial element;
        those can never reduce to the empty word, so the first hit is the same.
        """
        mul = self.spec.multiply
        rotU, invV = pu.rotations, pv.inverse_rotations
        elemU, where = pu.elements, pv.where
        nv = len(invV)
        linear = self.reducer.linear
        for C, Ci, c, ci in self._candidates():
            for i, Ui in enumerate(rotU):
                if prefilter:
                    js = where.get(mul(mul(c, elemU[i]), ci))
                    if not js:
                        continue
                else:
                    js = range(nv)
                CUC = C + Ui + Ci
                for j in js:
                    if not linear(CUC + invV[j])[0]:
                        return C, i, j
        return None

    def _candidates(self):
        if self._cands is None:
            X, inv = self.X, self.spec.invert
            out = []
            for C in self.candidates:
                c = X.evaluate(C)
                out.append((C, self._inv_word(C), c, inv(c)))
            self._cands = out
        return self._cands

    def _verify(self, U: Word, V: Word, verdict: ConjugacyVerdict):
        X, spec = self.X, self.spec
        u, v = X.evaluate(U), X.evaluate(V)
        truth = conjugate_exact(u, v, spec) is not None
        if truth != verdict.conjugate:
            raise SoundnessAlert(f"decide_conjugacy says {verdict.conjugate} but the exact oracle says {truth} "
                                 f"for {X.format_word(U)!r}, {X.format_word(V)!r} (B={self.B}, Φ bound {self.phi.bound})")
        if verdict.conjugate and spec.conjugate(u, X.evaluate(verdict.conjugator)) != v:
            raise SoundnessAlert(f"returned conjugator does not conjugate {X.format_word(U)!r} to {X.format_word(V)!r}")


def decide_conjugacy(U: Word, V: Word, X: MarkedAlphabet, metric: Metric, phi: PhiSet, B: int,
                     prefilter: bool = True, verify: bool = False) -> Optional[Word]:
    """A conjugator word ``Z`` with ``Z^-1 U Z = V``, or None."""
    return ConjugacySolver(X, metric, phi, B).decide(U, V, prefilter, verify).conjugator


# -- BCD and NSC -----------------------------------------------------------------------

@dataclass
class ConstantReport:
    name: str
    constant: Optional[int]
    L_max: int
    cap: int
    checked: int
    witness: Optional[tuple] = None
    rows: List[tuple] = field(default_factory=list)

    def summary(self) -> str:
        k = "none" if self.constant is None else str(self.constant)
        letter = "k" if self.name == "bcd" else "B"
        return f"{letter}={k} (empirical, L_max={self.L_max}, cap={self.cap}, {self.checked} cases)"


def cyclic_geodesics(metric: Metric, L_max: int) -> List[Tuple[Word, GroupElement]]:
    from .langmach import is_cyclic_geodesic

    return [(W, g) for W, g in geodesic_words(metric, L_max) if is_cyclic_geodesic(W, metric)]


def bcd_report(X: MarkedAlphabet, metric: Metric, L_max: int, k_max: int) -> ConstantReport:
    """Largest ``min(max(lU, lV), shortest conjugator between rotations)`` over
    conjugate cyclic geodesics of length at most ``L_max``.

    A running constant keeps the scan cheap: a pair only needs an exact
    value when neither of its terms is already below the current maximum.
    """
    if metric.radius < L_max:
        raise OutOfRangeError(f"ball radius {metric.radius} < L_max={L_max}")
    spec = X.spec
    mul, inv = spec.multiply, spec.invert
    classes: Dict[tuple, List[Tuple[Word, frozenset]]] = defaultdict(list)
    for W, g in cyclic_geodesics(metric, L_max):
        rots = frozenset(rotation_elements(W, X))
        classes[class_key(g, spec)].append((W, rots))
    by_len = metric.ball.spheres
    current = 0
    checked = 0
    witness = None
    rows = []

    def conjugator_within(rU, rV, k):
        for n in range(k + 1):
            for c in by_len[n]:
                ci = inv(c)
                if any(mul(mul(ci, u), c) in rV for u in rU):
                    return n
        return None

    for members in classes.values():
        # words with the same rotation elements give identical pairs
        items = list({rots: len(W) for W, rots in members}.items())
        for a, (rU, lU) in enumerate(items):
            for rV, lV in items[a:]:
                checked += 1
                big = max(lU, lV)
                if big <= current or rU == rV:
                    continue
                if conjugator_within(rU, rV, current) is not None:
                    continue
                n = conjugator_within(rU, rV, min(big, k_max + 1))
                value = big if n is None else min(big, n)
                if value > current:
                    current = value
                    pair = [W for W, r in members if r in (rU, rV)]
                    witness = (pair[0], pair[-1])
                    rows.append((X.format_word(pair[0]), X.format_word(pair[-1]), value))
                if current > k_max:
                    return ConstantReport("bcd", None, L_max, k_max, checked, witness, rows)
    return ConstantReport("bcd", current, L_max, k_max, checked, witness, rows)


def check_bcd(X: MarkedAlphabet, metric: Metric, L_max: int, k_max: int) -> Optional[int]:
    return bcd_report(X, metric, L_max, k_max).constant


def nsc_report(X: MarkedAlphabet, metric: Metric, L_max: int, B_max: int) -> ConstantReport:
    """Least B such that every non-conjugacy-geodesic cyclic geodesic of length
    ``>= B`` has a rotation shortened by conjugating with some ``|g| <= B``."""
    spec = X.spec
    mul, inv = spec.multiply, spec.invert
    spheres = metric.ball.spheres
    length = metric.length_or_none
    needs: List[Tuple[int, Optional[int], Word]] = []
    checked = 0
    for W, g in cyclic_geodesics(metric, L_max):
        n = len(W)
        if min_conj_length(g, metric) == n:
            continue
        checked += 1
        rots = set(rotation_elements(W, X))
        b = None
        for r in range(min(B_max, metric.radius) + 1):
            for c in spheres[r]:
                ci = inv(c)
                if any((k := length(mul(mul(c, u), ci))) is not None and k < n for u in rots):
                    b = r
                    break
            if b is not None:
                break
        needs.append((n, b, W))
    rows = [(X.format_word(W), "" if b is None else b, n) for n, b, W in needs]
    for B in range(B_max + 1):
        bad = [(n, b, W) for n, b, W in needs if n >= B and (b is None or b > B)]
        if not bad:
            return ConstantReport("nsc", B, L_max, B_max, checked, None, rows)
    n, b, W = bad[0]
    return ConstantReport("nsc", None, L_max, B_max, checked, (W,), rows)


def check_nsc(X: MarkedAlphabet, metric: Metric, L_max: int, B_max: int) -> Optional[int]:
    return nsc_report(X, metric, L_max, B_max).constant


# -- benchmark ---------------------------------------------------------------------------

def random_reduced_word(X: MarkedAlphabet, n: int, rng: random.Random) -> Word:
    """Uniform letters avoiding immediate ``x x^-1`` pairs."""
    inv = X.inverse
    out: List[int] = []
    while len(out) < n:
        x = rng.randrange(len(X))
        if out and inv[out[-1]] == x:
            continue
        out.append(x)
    return tuple(out)


def random_conjugate_pair(X: MarkedAlphabet, n: int, rng: random.Random, conj_len: int = 3):
    """``(U, V)`` of length about ``n`` with V a rotated conjugate of U."""
    U = random_reduced_word(X, n, rng)
    C = random_reduced_word(X, conj_len, rng)
    inv = X.inverse
    Ci = tuple(inv[x] for x in reversed(C))
    V = Ci + U + C
    k = rng.randrange(len(V))
    return U, V[k:] + V[:k]


@dataclass
class BenchResult:
    sizes: List[int]
    seconds: List[float]
    exponent: float
    rows: List[tuple]

    def to_csv(self) -> str:
        lines = ["n,trial,seconds,conjugate"]
        lines += [f"{n},{t},{s:.6f},{int(c)}" for n, t, s, c in self.rows]
        return "\n".join(lines) + "\n"


def loglog_exponent(sizes: Sequence[int], seconds: Sequence[float]) -> float:
    xs = [math.log(n) for n in sizes]
    ys = [math.log(max(s, 1e-9)) for s in seconds]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def bench(solver: ConjugacySolver, sizes: Sequence[int] = (50, 100, 200, 400), trials: int = 3,
          seed: int = 0, verify: bool = True, prefilter: bool = True) -> BenchResult:
    """Median wall time of :meth:`ConjugacySolver.decide` per size and the log-log slope."""
    if len(sizes) < 2:
        raise PreconditionError("need at least two sizes for a fit")
    rng = random.Random(seed)
    X = solver.X
    rows = []
    medians = []
    for n in sizes:
        times = []
        for t in range(trials):
            if t % 2 == 0:
                U, V = random_conjugate_pair(X, n, rng)
            else:
                U, V = random_reduced_word(X, n, rng), random_reduced_word(X, n, rng)
            t0 = time.perf_counter()
            verdict = solver.decide(U, V, prefilter=prefilter)
            dt = time.perf_counter() - t0
            if verify:
                solver._verify(U, V, verdict)
            times.append(dt)
            rows.append((n, t, dt, verdict.conjugate))
        times.sort()
        medians.append(times[len(times) // 2])
    return BenchResult(list(sizes), medians, loglog_exponent(sizes, medians), rows)

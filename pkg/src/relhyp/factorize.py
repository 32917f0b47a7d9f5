"""Factorizations ``A_0 U_1 A_1 ... U_n A_n`` and the words derived from them.

In a free product the parabolic subgroups meet trivially, so the blocks
``U_i`` are simply the maximal runs of letters sharing one parabolic tag
and the ``A_i`` are the runs of untagged letters between them. Everything
here works on tags only; elements are consulted just to test geodesy.

Factor languages ``L_omega`` are passed around as a mapping
``omega -> predicate`` where the predicate takes a block (a word of parent
letter indices, all tagged ``omega``) and answers membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Tuple, Union

from .errors import PreconditionError
from .group import GroupElement, MarkedAlphabet, Word
from .metric import BallTable, FactorBalls, Metric

FactorLanguages = Mapping[int, Callable[[Word], bool]]


@dataclass(frozen=True)
class Factorization:
    """``segments = (A_0, U_1, A_1, ..., U_n, A_n)`` and one tag per block."""

    segments: Tuple[Word, ...]
    tags: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.tags)

    @property
    def blocks(self) -> Tuple[Word, ...]:
        return self.segments[1::2]

    @property
    def gaps(self) -> Tuple[Word, ...]:
        return self.segments[0::2]

    def word(self) -> Word:
        return tuple(x for seg in self.segments for x in seg)

    def block_starts(self) -> List[int]:
        """Offsets into the word at which each ``U_i`` begins."""
        out, pos = [], 0
        for i, seg in enumerate(self.segments):
            if i % 2 == 1:
                out.append(pos)
            pos += len(seg)
        return out


def factorize(W: Word, X: MarkedAlphabet) -> Factorization:
    tags = X.tags
    segments: List[Word] = []
    block_tags: List[int] = []
    gap: List[int] = []
    i, n = 0, len(W)
    while i < n:
        t = tags[W[i]]
        if t is None:
            gap.append(W[i])
            i += 1
            continue
        j = i
        while j < n and tags[W[j]] == t:
            j += 1
        segments.append(tuple(gap))
        segments.append(tuple(W[i:j]))
        block_tags.append(t)
        gap = []
        i = j
    segments.append(tuple(gap))
    return Factorization(tuple(segments), tuple(block_tags))


def has_parabolic_shortening(F: Factorization, X: MarkedAlphabet, factor_balls: FactorBalls) -> bool:
    for U in F.blocks:
        if factor_balls.length(X.evaluate(U)) != len(U):
            return True
    return False


# -- derived words -------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicLetter:
    omega: int
    element: GroupElement


RelLetter = Union[int, ParabolicLetter]


@dataclass(frozen=True)
class RelativeWord:
    letters: Tuple[RelLetter, ...]
    alphabet: MarkedAlphabet

    def __len__(self):
        return len(self.letters)

    def element_of(self, item: RelLetter) -> GroupElement:
        return item.element if isinstance(item, ParabolicLetter) else self.alphabet.elements[item]

    def evaluate(self) -> GroupElement:
        mul = self.alphabet.spec.multiply
        g = self.alphabet.spec.identity
        for item in self.letters:
            g = mul(g, self.element_of(item))
        return g

    def __str__(self):
        X = self.alphabet
        parts: List[str] = []
        gap: List[str] = []
        for item in self.letters:
            if isinstance(item, ParabolicLetter):
                parts.append(" ".join(gap) or "-")
                (omega, vec), = item.element.syllables
                parts.append(f"({omega}:{','.join(map(str, vec))})")
                gap = []
            else:
                gap.append(X.symbols[item])
        parts.append(" ".join(gap) or "-")
        return " | ".join(parts)


def derive(W: Word, X: MarkedAlphabet, factor_balls: FactorBalls) -> RelativeWord:
    F = factorize(W, X)
    if has_parabolic_shortening(F, X, factor_balls):
        raise PreconditionError(f"{X.format_word(W)!r} has a parabolic shortening")
    out: List[RelLetter] = []
    for i, seg in enumerate(F.segments):
        if i % 2 == 0:
            out.extend(seg)
        else:
            out.append(ParabolicLetter(F.tags[i // 2], X.evaluate(seg)))
    return RelativeWord(tuple(out), X)


def vertex_backtracks(R: RelativeWord) -> bool:
    """True iff some subword of length at least 2 evaluates into a single factor."""
    spec = R.alphabet.spec
    elems = [R.element_of(x) for x in R.letters]
    for i in range(len(elems)):
        g = elems[i]
        for j in range(i + 1, len(elems)):
            g = spec.multiply(g, elems[j])
            if len(g.syllables) <= 1:
                return True
    return False


# -- factor languages and Rel ---------------------------------------------------

def geo_factor_languages(X: MarkedAlphabet, factor_balls: FactorBalls) -> Dict[int, Callable[[Word], bool]]:
    """``L_omega = Geo(H_omega, X ∩ H_omega)`` for every factor with letters."""
    def make():
        return lambda U: factor_balls.length(X.evaluate(U)) == len(U)
    return {omega: make() for omega in factor_balls.factors()}


def shortlex_factor_languages(X: MarkedAlphabet, factor_balls: FactorBalls) -> Dict[int, Callable[[Word], bool]]:
    """``L_omega = ShortLex(H_omega, X ∩ H_omega)`` (letter order inherited from X)."""
    def make():
        return lambda U: factor_balls.geodesic_word(X.evaluate(U)) == tuple(U)
    return {omega: make() for omega in factor_balls.factors()}


def dfa_factor_languages(dfas: Mapping, factor_balls: FactorBalls) -> Dict[int, Callable[[Word], bool]]:
    """Wrap DFAs over each factor sub-alphabet as block predicates on parent indices."""
    out = {}
    for omega, A in dfas.items():
        local = {p: i for i, p in enumerate(factor_balls.subalphabets[omega][1])}
        out[omega] = (lambda A, local: lambda U: A.accepts(local[x] for x in U))(A, local)
    return out


def in_rel(W: Word, X: MarkedAlphabet, L: FactorLanguages) -> bool:
    """Direct decider for ``Rel(X, {L_omega})``: every block lies in its factor language."""
    F = factorize(W, X)
    return all(L[t](U) for t, U in zip(F.tags, F.blocks))


# -- special words ----------------------------------------------------------------

class SpecialWords:
    """Decider and constructor for special words over a fixed (X, {L_omega}).

    ``metric`` must resolve every element reached; geodesic representatives
    are enumerated exhaustively, which is only sensible at desk scale.
    """

    def __init__(self, X: MarkedAlphabet, metric: Metric, factor_balls: FactorBalls, L: FactorLanguages):
        self.X = X
        self.metric = metric
        self.factor_balls = factor_balls
        self.L = L
        self._maxfirst: Dict[GroupElement, int] = {}
        self._rep: Dict[GroupElement, Word] = {}

    def _first_block(self, W: Word) -> int:
        F = factorize(W, self.X)
        return len(F.blocks[0]) if F.length else 0

    def max_first_block(self, g: GroupElement) -> int:
        """Longest ``U_1`` over geodesic Rel-representatives of ``g`` (0 if none has a block)."""
        k = self._maxfirst.get(g)
        if k is None:
            k = max((self._first_block(W) for W in self.metric.geodesics(g) if in_rel(W, self.X, self.L)),
                    default=0)
            self._maxfirst[g] = k
        return k

    def is_special(self, W: Word) -> bool:
        X = self.X
        W = tuple(W)
        if not self.metric.is_geodesic(W):
            return False
        if not in_rel(W, X, self.L):
            return False
        F = factorize(W, X)
        if F.length == 0:
            return True
        g = X.evaluate(W)
        if len(F.blocks[0]) < self.max_first_block(g):
            return False
        tail = W[len(F.segments[0]) + len(F.segments[1]):]
        return self.is_special(tail)

    def representative(self, g: GroupElement) -> Word:
        """A special word for ``g``, following the inductive construction.

        Among geodesics of ``g`` with a longest first block the
        lexicographically least is taken, its first block is swapped for the
        least word of ``L_omega`` representing the same element, and the rest
        is replaced recursively by a special word.
        """
        if g in self._rep:
            return self._rep[g]
        X = self.X
        geos = self.metric.geodesics(g)
        plain = [W for W in geos if factorize(W, X).length == 0]
        if plain:
            W = plain[0]
        else:
            best = max(self._first_block(W) for W in geos)
            W = next(V for V in geos if self._first_block(V) == best)
            F = factorize(W, X)
            A0, U1 = F.segments[0], F.segments[1]
            omega = F.tags[0]
            u = X.evaluate(U1)
            C = next((V for V in self._factor_geodesics(u) if self.L[omega](V)), None)
            if C is None:
                raise PreconditionError(f"L_{omega} has no representative of {u} (L1 fails)")
            tail = X.evaluate(W[len(A0) + len(U1):])
            W = tuple(A0) + tuple(C) + self.representative(tail)
        self._rep[g] = W
        return W

    def _factor_geodesics(self, u: GroupElement) -> List[Word]:
        omega = u.syllables[0][0]
        sub, idx = self.factor_balls.subalphabets[omega]
        self.factor_balls.length(u)
        m = Metric(sub, self.factor_balls[omega])
        return [tuple(idx[i] for i in V) for V in m.geodesics(u)]


def is_special(W: Word, X: MarkedAlphabet, ball: BallTable, factor_balls: FactorBalls,
               L: FactorLanguages) -> bool:
    return SpecialWords(X, Metric(X, ball, factor_balls), factor_balls, L).is_special(W)


def special_representative(g: GroupElement, X: MarkedAlphabet, ball: BallTable, factor_balls: FactorBalls,
                           L: FactorLanguages) -> Word:
    return SpecialWords(X, Metric(X, ball, factor_balls), factor_balls, L).representative(g)

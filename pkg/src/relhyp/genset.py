"""Generating-set enlargements.

``ball_enlarge`` replaces X by every nontrivial element of X-length at most
m, which keeps FFTP. ``parabolic_enlarge`` adds, for each factor, every
element of factor length at most k over ``Y ∩ H_omega``. For abelian
factors any k works, so unlike the general construction k is simply a
parameter here.
"""

from __future__ import annotations

from typing import Dict, Set

from .errors import AlphabetError, OutOfRangeError, PreconditionError
from .group import GroupElement, Letter, MarkedAlphabet
from .metric import BallTable, FactorBalls


def _element_symbol(X: MarkedAlphabet, g: GroupElement, word) -> str:
    return ".".join(X.symbols[i] for i in word) if word else "1"


def _fresh_symbol(base: str, taken: Set[str]) -> str:
    sym = base.replace(" ", "")
    if sym in taken:
        k = 2
        while f"{sym}_{k}" in taken:
            k += 1
        sym = f"{sym}_{k}"
    taken.add(sym)
    return sym


def ball_enlarge(X: MarkedAlphabet, m: int, ball: BallTable) -> MarkedAlphabet:
    if m <= 0:
        raise AlphabetError("m must be positive (the radius-0 ball has no nontrivial elements)")
    if m > ball.radius:
        raise OutOfRangeError(f"m={m} exceeds ball radius {ball.radius}")
    from .metric import Metric

    metric = Metric(X, ball)
    taken: Set[str] = set()
    letters = []
    existing = {e: i for i, e in enumerate(X.elements)}
    for k in range(1, m + 1):
        for g in ball.spheres[k]:
            if g in existing:
                sym = X.symbols[existing[g]]
                taken.add(sym)
            else:
                sym = _fresh_symbol(_element_symbol(X, g, metric.geodesic_word(g)), taken | set(X.symbols))
            letters.append((sym, g, None))
    # keep the original letters first, in their original order
    order = {e: i for i, e in enumerate(X.elements)}
    letters.sort(key=lambda t: (order.get(t[1], len(order)),))
    return MarkedAlphabet(X.spec, letters, close_inverses=True)


def theta(X: MarkedAlphabet, t: int, factor_balls: FactorBalls = None,
          ball: BallTable = None) -> Set[GroupElement]:
    """Nontrivial parabolic elements of X-length at most ``t``.

    With a ball the X-length is exact. Otherwise factor lengths are used,
    which agree with X-lengths for parabolic alphabets (the metric fast path).
    """
    out: Set[GroupElement] = set()
    if t <= 0:
        return out
    if ball is not None:
        if t > ball.radius:
            raise OutOfRangeError(f"t={t} exceeds ball radius {ball.radius}")
        return {g for g in ball.elements(t) if len(g.syllables) == 1}
    if factor_balls is None:
        factor_balls = FactorBalls(X, radius=t)
    for omega in factor_balls.factors():
        fb = factor_balls.ball(omega, t)
        out.update(g for g in fb.elements(t) if not g.is_identity)
    return out


def parabolic_enlarge(Y: MarkedAlphabet, k: int, factor_balls: FactorBalls = None) -> MarkedAlphabet:
    if k < 1:
        raise PreconditionError("k must be at least 1")
    nf = len(Y.spec.factors)
    if factor_balls is None:
        factor_balls = FactorBalls(Y, radius=k)
    missing = [w for w in range(nf) if w not in factor_balls]
    if missing:
        raise PreconditionError(f"Y has no letters in factor(s) {missing}")
    letters = list(Y.letters)
    present = set(Y.elements)
    taken = set(Y.symbols)
    extra: Dict[int, list] = {}
    for omega in range(nf):
        ball = factor_balls.ball(omega, k)
        sub, idx = factor_balls.subalphabets[omega]
        for r in range(2, k + 1):
            for h in ball.spheres[r]:
                if h in present:
                    continue
                word = factor_balls.geodesic_word(h)
                sym = _fresh_symbol(_element_symbol(Y, h, word), taken)
                present.add(h)
                extra.setdefault(omega, []).append(Letter(sym, h, omega))
    for omega in sorted(extra):
        letters.extend(extra[omega])
    return MarkedAlphabet(Y.spec, letters, close_inverses=True)

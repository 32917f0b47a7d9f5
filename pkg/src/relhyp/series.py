"""Exact rational growth series of regular languages.

Polynomials are tuples of Python ints, lowest degree first, with no
trailing zeros (the zero polynomial is ``()``). The generating function of
a DFA's language is ``e_start^T (I - zM)^{-1} f`` where ``M`` counts
transitions between live states and ``f`` marks accept states; we solve
that system by fraction-free (Bareiss) elimination over Z[z] and cancel
with a subresultant gcd, so nothing is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Sequence, Tuple

from .automata import Dfa

Poly = Tuple[int, ...]

ZERO: Poly = ()
ONE: Poly = (1,)


def norm(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def deg(p: Poly) -> int:
    return len(p) - 1


def padd(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return norm(out)


def pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def psub(p: Poly, q: Poly) -> Poly:
    return padd(p, pneg(q))


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return norm(out)


def pscale(p: Poly, c: int) -> Poly:
    return norm(c * a for a in p) if c else ZERO


def pdiv_exact(p: Poly, q: Poly) -> Poly:
    """``p / q`` over Z; raises ``ArithmeticError`` if ``q`` does not divide ``p``."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return ZERO
    rem = list(p)
    dq, lc = deg(q), q[-1]
    out = [0] * (len(p) - dq) if len(p) > dq else []
    for k in range(len(p) - 1 - dq, -1, -1):
        c = rem[k + dq]
        if c % lc:
            raise ArithmeticError("inexact polynomial division")
        c //= lc
        out[k] = c
        if c:
            for j, b in enumerate(q):
                rem[k + j] -= c * b
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return norm(out)


def prem(p: Poly, q: Poly) -> Poly:
    """Pseudo-remainder ``lc(q)^(deg p - deg q + 1) p mod q``."""
    dq, lc = deg(q), q[-1]
    if deg(p) < dq:
        return p
    r = list(p)
    for k in range(deg(p) - dq, -1, -1):
        c = r[k + dq]
        r = [lc * a for a in r]
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
        r.pop()
    return norm(r)


def content(p: Poly) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def primitive(p: Poly) -> Poly:
    c = content(p)
    if c == 0:
        return ZERO
    if p[-1] < 0:
        c = -c
    return tuple(a // c for a in p)


def pgcd(a: Poly, b: Poly) -> Poly:
    """Gcd in Z[z] by the subresultant remainder sequence; positive leading coefficient."""
    if not a:
        return primitive(b) if b else ZERO
    if not b:
        return primitive(a)
    if deg(a) < deg(b):
        a, b = b, a
    d = gcd(content(a), content(b))
    a, b = primitive(a), primitive(b)
    g = h = 1
    while True:
        delta = deg(a) - deg(b)
        r = prem(a, b)
        if not r:
            break
        if deg(r) == 0:
            b = ONE
            break
        a = b
        b = tuple(c // (g * h ** delta) for c in r)
        g = a[-1]
        h = g ** delta // h ** (delta - 1) if delta >= 1 else h
    return pscale(primitive(b), d)


def peval(p: Poly, z) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * z + c
    return acc


def expand(num: Poly, den: Poly, n: int) -> List[int]:
    """Taylor coefficients ``c_0 .. c_n`` of ``num / den`` (requires ``den(0) = ±1``)."""
    if not den or den[0] not in (1, -1):
        raise ArithmeticError("denominator constant term must be a unit")
    d0 = den[0]
    out: List[int] = []
    for k in range(n + 1):
        s = num[k] if k < len(num) else 0
        for i in range(1, min(k, deg(den)) + 1):
            s -= den[i] * out[k - i]
        out.append(s * d0)
    return out


def format_poly(p: Poly, var: str = "z") -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class RationalSeries:
    """``numerator / denominator`` in lowest terms with ``denominator(0) = 1``."""

    numerator: Poly
    denominator: Poly

    @classmethod
    def reduced(cls, num: Poly, den: Poly) -> "RationalSeries":
        num, den = norm(num), norm(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(ZERO, ONE)
        g = pgcd(num, den)
        num, den = pdiv_exact(num, g), pdiv_exact(den, g)
        if den[0] < 0:
            num, den = pneg(num), pneg(den)
        if den[0] != 1:
            raise ArithmeticError(f"series denominator {den} has non-unit constant term")
        return cls(num, den)

    def coefficients(self, n: int = 20) -> List[int]:
        return expand(self.numerator, self.denominator, n)

    def __str__(self):
        return f"{_wrap(format_poly(self.numerator))} / {_wrap(format_poly(self.denominator))}"

    def to_text(self, n: int = 20) -> str:
        return f"{self} ; coeffs: {', '.join(map(str, self.coefficients(n)))}"

    def equals(self, num: Sequence[int], den: Sequence[int]) -> bool:
        """Cross-multiplied equality with an unreduced fraction."""
        return pmul(self.numerator, norm(den)) == pmul(norm(num), self.denominator)


def _wrap(s: str) -> str:
    return f"({s})" if (" " in s) else s


def _bareiss_solve(A: List[List[Poly]], b: List[Poly]) -> Tuple[Poly, Poly]:
    """Return ``(x_last * det A, det A)`` for ``A x = b`` by fraction-free elimination.

    The leading principal minors of ``I - zM`` all have constant term 1, so
    no pivoting is ever needed and every Bareiss division is exact.
    """
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    prev = ONE
    for k in range(n - 1):
        piv = M[k][k]
        if not piv:
            raise ArithmeticError("vanishing pivot in fraction-free elimination")
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n + 1):
                t = pmul(piv, rowi[j])
                if mik and rowk[j]:
                    t = psub(t, pmul(mik, rowk[j]))
                rowi[j] = pdiv_exact(t, prev) if prev != ONE else t
            rowi[k] = ZERO
        prev = piv
    return M[n - 1][n], M[n - 1][n - 1]


def growth_series(A: Dfa) -> RationalSeries:
    """Exact ``sum_n count_words(A, n) z^n`` as a reduced rational function."""
    live = A.live_states()
    if A.start not in live:
        return RationalSeries(ZERO, ONE)
    states = [q for q in A.reachable() if q in live and q != A.start] + [A.start]
    pos = {q: i for i, q in enumerate(states)}
    n = len(states)
    mat = [[ZERO] * n for _ in range(n)]
    for q in states:
        i = pos[q]
        counts = {}
        for r in A.table[q]:
            if r in pos:
                counts[r] = counts.get(r, 0) + 1
        mat[i][i] = ONE
        for r, c in counts.items():
            j = pos[r]
            mat[i][j] = padd(mat[i][j], (0, -c))
    rhs = [ONE if q in A.accept else ZERO for q in states]
    num, den = _bareiss_solve(mat, rhs)
    return RationalSeries.reduced(num, den)

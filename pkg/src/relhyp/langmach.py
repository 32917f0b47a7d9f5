"""Language machines built from a length oracle.

* :func:`ns_automaton` is the Neumann-Shapiro geodesic acceptor for a
  fellow-travel constant C. A state is either the fail state or a function
  ``phi`` on the radius-C ball recording how much longer each neighbour
  ``Wg`` of the current endpoint is than ``W`` itself.
* :func:`rel_language` assembles ``Rel(X, {L_omega})`` from per-factor DFAs
  by complementing the language of words with some bad block.
* :func:`shortlex_automaton` recognises ShortLex by tracking the word
  differences of lexicographically smaller competitors, bounded by K.

CycGeo and ConjGeo only get membership deciders.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Mapping, Optional, Sequence

from . import automata as au
from .automata import Dfa
from .errors import OutOfRangeError, PreconditionError
from .factorize import in_rel
from .group import MarkedAlphabet, Word
from .metric import BallTable, FactorBalls, Metric


# -- Neumann-Shapiro acceptor ---------------------------------------------

def ns_automaton(X: MarkedAlphabet, C: int, ball: BallTable, minimal: bool = True) -> Dfa:
    """The geodesic acceptor with fellow-travel constant ``C``.

    The start state is ``phi_0(g) = |g|``, the run invariant at the empty
    word. Values are clamped to ``[-C, C]``.
    """
    if C <= 0:
        raise PreconditionError("fellow-travel constant C must be positive")
    if ball.radius < 2 * C + 1:
        raise OutOfRangeError(f"ball radius {ball.radius} < 2C+1 = {2 * C + 1}")
    mul = X.spec.multiply
    inv = X.spec.invert
    lengths = ball.lengths
    theta = list(ball.elements(C))
    pos = {g: i for i, g in enumerate(theta)}
    k = len(X)
    steps_back = [inv(x) for x in X.elements]
    # per letter: for each g either ("in", index of xg) or ("out", neighbour indices)
    moves = []
    letter_pos = []
    for x in X.elements:
        letter_pos.append(pos[x])
        row = []
        for g in theta:
            xg = mul(x, g)
            j = pos.get(xg)
            if j is not None:
                row.append((True, j))
                continue
            nbrs = set()
            for y in list(X.elements) + steps_back:
                h = mul(xg, y)
                if h in pos:
                    nbrs.add(pos[h])
            if not nbrs:
                raise OutOfRangeError(f"no neighbour of {xg} inside the radius-{C} ball")
            row.append((False, tuple(sorted(nbrs))))
        moves.append(row)

    def clamp(v):
        return C if v > C else (-C if v < -C else v)

    def step(phi, a):
        if phi[letter_pos[a]] != 1:
            return None
        out = []
        for inside, ref in moves[a]:
            if inside:
                out.append(clamp(phi[ref] - 1))
            else:
                out.append(clamp(min(phi[j] for j in ref)))
        return tuple(out)

    start = tuple(clamp(lengths[g]) for g in theta)
    A = Dfa.from_predicate_states(k, start, step, lambda s: True)
    A = Dfa(k, A.table, A.start, A.accept, sink=A.sink, symbols=X.symbols)
    return au.minimize(A) if minimal else A


def ns_state_values(X: MarkedAlphabet, C: int, ball: BallTable, word: Word):
    """Run the unminimised acceptor and return ``{g: phi(g)}`` at the reached state (None if failed)."""
    theta = list(ball.elements(C))
    mul = X.spec.multiply
    lengths = ball.lengths
    pos = {g: i for i, g in enumerate(theta)}
    phi = [min(C, lengths[g]) for g in theta]
    for a in word:
        x = X.elements[a]
        if phi[pos[x]] != 1:
            return None
        new = []
        for g in theta:
            xg = mul(x, g)
            if xg in pos:
                v = phi[pos[xg]] - 1
            else:
                vals = [phi[pos[mul(xg, y)]] for y in list(X.elements) + [X.spec.invert(e) for e in X.elements]
                        if mul(xg, y) in pos]
                v = min(vals)
            new.append(max(-C, min(C, v)))
        phi = new
    return dict(zip(theta, phi))


def restricted_geodesics(A: Dfa, L: Dfa) -> Dfa:
    """``Geo ∩ L`` for a prefix-closed ``L``."""
    if not L.is_prefix_closed():
        raise PreconditionError("L is not prefix-closed")
    return au.intersect(A, L)


def geodesic_acceptor(X: MarkedAlphabet, ball: BallTable, C: Optional[int] = None, **fftp_kwargs):
    """``(dfa, C)``; with ``C=None`` the constant comes from :func:`fellow.fftp_constant`."""
    if C is None:
        from .fellow import fftp_constant

        C = fftp_constant(X, ball, **fftp_kwargs)
        if C is None:
            raise PreconditionError("no FFTP constant found within the search bounds")
    return ns_automaton(X, C, ball), C


# -- Rel --------------------------------------------------------------------

def _block_dfa(k: int, letters: Sequence[int]) -> Dfa:
    """``(letters)^+`` over the full alphabet."""
    return au.concat(Dfa.letters(k, letters), Dfa.star_of(k, letters))


def rel_language(X: MarkedAlphabet, L: Mapping[int, Dfa], factor_balls: Optional[FactorBalls] = None,
                 l1_radius: int = 4) -> Dfa:
    """DFA for ``Rel(X, {L_omega})`` from DFAs over each factor sub-alphabet.

    ``L[omega]`` reads sub-alphabet indices (the order of
    ``X.factor_letters(omega)``). When ``factor_balls`` is given each
    language is first checked for (L1) up to ``l1_radius``.
    """
    k = len(X)
    factors = [w for w in range(len(X.spec.factors)) if X.factor_letters(w)]
    missing = [w for w in factors if w not in L]
    if missing:
        raise PreconditionError(f"no factor language for factor(s) {missing}")
    if factor_balls is not None:
        from .fellow import check_L1

        for w in factors:
            rep = check_L1(L[w], w, X, factor_balls, l1_radius)
            if not rep.ok:
                raise PreconditionError(f"(L1) fails for factor {w}: {rep.detail}")
    untagged = [i for i, t in enumerate(X.tags) if t is None]
    universe = Dfa.universal(k)
    free_letters = Dfa.letters(k, untagged)
    bad = Dfa.empty(k)
    for w in factors:
        Xw = X.factor_letters(w)
        Lc = au.intersect(au.difference(Dfa.star_of(k, Xw), au.lift(L[w], Xw, k)), _block_dfa(k, Xw))
        P = free_letters
        for mu in factors:
            if mu != w:
                P = au.union(P, _block_dfa(k, X.factor_letters(mu)))
        S = Dfa.letters(k, [i for i, t in enumerate(X.tags) if t != w])
        before = au.union(au.concat(universe, P), Dfa.epsilon(k))
        after = au.union(au.concat(S, universe), Dfa.epsilon(k))
        bad = au.union(bad, au.concat(au.concat(before, Lc), after))
    out = au.complement(bad)
    return Dfa(k, out.table, out.start, out.accept, sink=out.sink, symbols=X.symbols)


def rel_decider(X: MarkedAlphabet, L: Mapping[int, Dfa]) -> Callable[[Word], bool]:
    """The factorization-based membership test matching :func:`rel_language`."""
    preds = {}
    for w, A in L.items():
        local = {p: i for i, p in enumerate(X.factor_letters(w))}
        preds[w] = (lambda A, local: lambda U: A.accepts(local[x] for x in U))(A, local)
    return lambda W: in_rel(tuple(W), X, preds)


# -- ShortLex -------------------------------------------------------------------

def is_shortlex(W: Word, metric: Metric, geo: Optional[Dfa] = None) -> bool:
    """Geodesic and lexicographically least among geodesics of its element.

    The search walks geodesic prefixes of ``evaluate(W)`` in letter order
    (inside ``geo`` when given) and stops at the first complete word.
    """
    W = tuple(W)
    X = metric.X
    g = X.evaluate(W)
    n = metric.length(g)
    if n != len(W):
        return False
    if geo is not None and not geo.accepts(W):
        return False
    mul, inv = X.spec.multiply, X.spec.invert
    inv_letters = [inv(x) for x in X.elements]

    def first(rest, q, remaining):
        if remaining == 0:
            return ()
        for i, xi in enumerate(inv_letters):
            if geo is not None:
                nq = geo.table[q][i]
                if nq == geo.sink:
                    continue
            else:
                nq = None
            r = mul(xi, rest)
            if metric.length_or_none(r) == remaining - 1:
                tail = first(r, nq, remaining - 1)
                if tail is not None:
                    return (i,) + tail
        return None

    return first(g, geo.start if geo is not None else None, n) == W


def shortlex_automaton(X: MarkedAlphabet, geo: Dfa, K: int, ball: BallTable) -> Dfa:
    """Words of ``geo`` with no lex-smaller competitor whose differences stay within radius K.

    A competitor ``U`` reads one letter per letter of ``W``; once it has
    taken a strictly smaller letter its word difference ``U_t^-1 W_t`` is
    tracked. ``W`` is rejected when some difference returns to the
    identity. The result always contains ShortLex and shrinks to it once K
    bounds the fellow-travel distance to the nearest competitor.
    """
    if ball.radius < K + 1:
        raise OutOfRangeError(f"ball radius {ball.radius} < K+1")
    mul, inv = X.spec.multiply, X.spec.invert
    lengths = ball.lengths
    elems = X.elements
    invs = [inv(x) for x in elems]
    k = len(X)
    identity = X.spec.identity

    def step(state, a):
        q, diffs = state
        nq = geo.table[q][a]
        if nq == geo.sink:
            return None
        x = elems[a]
        new = set()
        for d in diffs:
            dx = mul(d, x)
            for y in invs:
                e = mul(y, dx)
                if lengths.get(e, K + 1) <= K:
                    new.add(e)
        for b in range(a):
            e = mul(invs[b], x)
            if lengths.get(e, K + 1) <= K:
                new.add(e)
        if identity in new:
            return None
        return (nq, frozenset(new))

    A = Dfa.from_predicate_states(k, (geo.start, frozenset()), step, lambda s: s[0] in geo.accept)
    A = au.minimize(A)
    return Dfa(k, A.table, A.start, A.accept, sink=A.sink, symbols=X.symbols)


def verified_shortlex_automaton(X: MarkedAlphabet, geo: Dfa, metric: Metric, max_len: int = 8,
                                K_max: int = 6):
    """Smallest K whose machine agrees with :func:`is_shortlex` on all words up to ``max_len``.

    Returns ``(dfa, K)``. Since each machine contains ShortLex, agreement on
    the counts of accepted words per length is agreement on the words.
    """
    truth = None
    for K in range(1, K_max + 1):
        if metric.radius < K + 1:
            break
        A = shortlex_automaton(X, geo, K, metric.ball)
        counts = au.count_sequence(A, max_len)
        if truth is None:
            truth = _sphere_counts(metric, geo, max_len)
        if counts == truth:
            return A, K
    raise PreconditionError(f"no K <= {K_max} gives ShortLex up to length {max_len}")


def _sphere_counts(metric: Metric, geo: Dfa, n: int) -> List[int]:
    """Number of elements of each length, read off the geodesic language.

    Every element has exactly one ShortLex word, so the truth is the count of
    distinct endpoints of accepted words per length.
    """
    X = metric.X
    out = []
    for m in range(n + 1):
        out.append(len({X.evaluate(W) for W in geo.words(m)}))
    return out


def factor_shortlex_languages(X: MarkedAlphabet, factor_balls: FactorBalls, max_len: int = 8,
                              fftp_L_max: int = 6) -> Dict[int, Dfa]:
    """ShortLex DFAs over ``X ∩ H_omega`` for each factor, checked against brute force."""
    from .fellow import fftp_constant

    out = {}
    for w in factor_balls.factors():
        sub, _ = factor_balls.subalphabets[w]
        C = fftp_constant(sub, factor_balls.ball(w, fftp_L_max), L_max=fftp_L_max)
        if C is None:
            raise PreconditionError(f"factor {w}: no FFTP constant found")
        fball = factor_balls.ball(w, max(max_len, 2 * C + 1, C + 2))
        geo = ns_automaton(sub, C, fball)
        A, _ = verified_shortlex_automaton(sub, geo, Metric(sub, fball), max_len=max_len)
        out[w] = A
    return out


def factor_geo_languages(X: MarkedAlphabet, factor_balls: FactorBalls, fftp_L_max: int = 6) -> Dict[int, Dfa]:
    from .fellow import fftp_constant

    out = {}
    for w in factor_balls.factors():
        sub, _ = factor_balls.subalphabets[w]
        C = fftp_constant(sub, factor_balls.ball(w, fftp_L_max), L_max=fftp_L_max)
        if C is None:
            raise PreconditionError(f"factor {w}: no FFTP constant found")
        out[w] = ns_automaton(sub, C, factor_balls.ball(w, 2 * C + 1))
    return out


# -- cyclic and conjugacy geodesics ------------------------------------------------

def cyclic_shifts(W: Word):
    W = tuple(W)
    return [W[i:] + W[:i] for i in range(max(1, len(W)))]


def is_cyclic_geodesic(W: Word, metric: Metric) -> bool:
    return all(metric.is_geodesic(V) for V in cyclic_shifts(W))


def is_conjugacy_geodesic(W: Word, metric: Metric) -> bool:
    from .conjugacy import min_conj_length

    return len(W) == min_conj_length(metric.X.evaluate(tuple(W)), metric)


# -- geodesic normal forms --------------------------------------------------------

def factor_languages(X: MarkedAlphabet, factor_balls: FactorBalls, kind: str = "shortlex") -> Dict[int, Dfa]:
    if kind == "shortlex":
        return factor_shortlex_languages(X, factor_balls)
    if kind == "geo":
        return factor_geo_languages(X, factor_balls)
    raise PreconditionError(f"unknown factor language {kind!r} (shortlex or geo)")


def geo_rel_automaton(X: MarkedAlphabet, geo: Dfa, factor_balls: FactorBalls, kind: str = "shortlex") -> Dfa:
    """Minimal DFA for ``Geo ∩ Rel(X, {L_omega})``."""
    rel = rel_language(X, factor_languages(X, factor_balls, kind), factor_balls)
    A = au.intersect(geo, rel)
    return Dfa(len(X), A.table, A.start, A.accept, sink=A.sink, symbols=X.symbols)


def geo_rel_decider(metric: Metric, factor_balls: FactorBalls) -> Callable[[Word], bool]:
    """Membership in ``Geo ∩ Rel`` with ShortLex factor languages, decided directly."""
    from .factorize import shortlex_factor_languages

    L = shortlex_factor_languages(metric.X, factor_balls)
    X = metric.X
    return lambda W: metric.is_geodesic(tuple(W)) and in_rel(tuple(W), X, L)


def rel_normal_form(X: MarkedAlphabet, factor_balls: FactorBalls) -> Callable:
    """``g -> [W]``: the one word of Geo ∩ Rel(ShortLex factors) for g, over a parabolic X.

    Geodesics over a union of factor alphabets spell the syllables one
    block each, so the word is the ShortLex factor words laid end to end.
    """
    from .group import GroupElement

    if not X.is_parabolic:
        raise PreconditionError("normal forms by syllables need every letter to be parabolic")

    def rep(g):
        out = []
        for s in g.syllables:
            out.extend(factor_balls.geodesic_word(GroupElement((s,))))
        return [tuple(out)]

    return rep

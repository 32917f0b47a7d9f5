from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from brute import async_brute, bfs_lengths, words
from relhyp import catalog
from relhyp.automata import Dfa
from relhyp.fellow import (async_constant, async_fellow, biautomatic_fellow_check, check_L1, check_Lexists,
                           check_Lforall, check_reparametrization, fftp_constant, fftp_report,
                           path_vertices, reparametrizations, staircase, sync_distance)
from relhyp.langmach import is_shortlex
from relhyp.metric import FactorBalls, Metric, build_ball

Z = catalog.integers()
Z2 = catalog.free_abelian()
F2 = catalog.free_group()


F2_FAST = Metric(F2, None, FactorBalls(F2, 14))


def w(X, t):
    return X.parse_word(t)


def dist_from(lengths, X):
    inv, mul = X.spec.invert, X.spec.multiply
    return lambda g, h: lengths[mul(inv(g), h)]


def test_sync_examples(metrics):
    m = metrics("Z2")
    assert sync_distance(w(Z2, "e1 e2 e1"), w(Z2, "e1 e2 e1"), m) == 0
    assert sync_distance(w(Z2, "e1 e2"), w(Z2, "e2 e1"), m) == 2
    assert sync_distance(w(F2, "a b"), w(F2, "a"), metrics("F2")) == 1


def test_async_examples(metrics):
    mf = metrics("F2")
    U = w(F2, "a b a^-1")
    assert async_fellow(U, U, 0, mf)
    assert not async_fellow(w(F2, "a b a b"), w(F2, "a b"), 1, mf)
    assert async_fellow(w(F2, "a b a b"), w(F2, "a b"), 2, mf)
    m = metrics("Z2")
    assert async_fellow(w(Z2, "e1 e2"), w(Z2, "e2 e1"), 2, m)
    # a diagonal staircase step pairs (1,0) with (0,0) and then (1,1) with (0,1)
    assert async_constant(w(Z2, "e1 e2"), w(Z2, "e2 e1"), m) == 1


@pytest.mark.parametrize("name", ["Z2", "F2+t"])
def test_async_matches_explicit_search(name, metrics):
    X = catalog.by_name(name)
    m = metrics(name, 6)
    lengths = bfs_lengths(X, 6)
    d = dist_from(lengths, X)
    ws = list(words(len(X), 3))
    for U, V in product(ws[:: max(1, len(ws) // 40)], repeat=2):
        p, q = path_vertices(U, X), path_vertices(V, X)
        c = async_constant(U, V, m)
        assert async_brute(p, q, d, c) and (c == 0 or not async_brute(p, q, d, c - 1))


@pytest.mark.parametrize("name", ["Z2", "F2", "F2+t"])
def test_sync_implies_async_and_reparametrization(name, metrics):
    X = catalog.by_name(name)
    m = metrics(name, 6)
    ws = list(words(len(X), 3))
    for U, V in product(ws[::7], repeat=2):
        s = sync_distance(U, V, m)
        assert async_constant(U, V, m) <= s
        K = async_constant(U, V, m)
        path = staircase(U, V, K, m)
        phi, psi = reparametrizations(path, max(len(U), len(V)) + 2)
        assert check_reparametrization(U, V, K, m, phi, psi)
        assert staircase(U, V, K - 1, m) is None if K > 0 else True


def _brute_fftp(X, L):
    """Max over all non-geodesics of the least async constant to a shorter equal word."""
    lengths = bfs_lengths(X, L + 1)
    d = dist_from(lengths, X)
    by_element = {}
    for V in words(len(X), L - 1):
        by_element.setdefault(X.evaluate(V), []).append(V)
    worst = 0
    for W in words(len(X), L):
        g = X.evaluate(W)
        if lengths[g] == len(W):
            continue
        p = path_vertices(W, X)
        best = None
        for V in by_element[g]:
            if len(V) >= len(W):
                continue
            q = path_vertices(V, X)
            k = 0
            while not async_brute(p, q, d, k):
                k += 1
            best = k if best is None else min(best, k)
        worst = max(worst, best)
    return worst


@pytest.mark.parametrize("name,L", [("Z", 6), ("Z2", 5), ("F2", 5), ("F2+t", 4), ("Z2*Z", 4)])
def test_fftp_matches_brute_force(name, L):
    X = catalog.by_name(name)
    assert fftp_constant(X, build_ball(X, L), L_max=L, K_max=4) == _brute_fftp(X, L)


def test_fftp_examples():
    assert fftp_constant(Z, build_ball(Z, 8)) == 1
    assert fftp_constant(F2, build_ball(F2, 8)) == 1
    assert fftp_constant(Z2, build_ball(Z2, 8)) <= 2


def test_fftp_monotone_in_L_max():
    X = catalog.f2_plus_t()
    ball = build_ball(X, 6)
    values = [fftp_report(X, ball, L, 4).constant for L in range(2, 7)]
    assert values == sorted(values)


def test_fftp_report_none_when_cap_too_small():
    rep = fftp_report(F2, build_ball(F2, 4), 4, 0)
    assert rep.constant is None and rep.witness is not None
    assert "fftp K=none" in rep.summary()


def test_fftp_report_csv():
    rep = fftp_report(F2, build_ball(F2, 3), 3, 2)
    lines = rep.to_csv(F2).splitlines()
    assert lines[0] == "word,witness,constant" and lines[1] == "a a^-1,,1"
    assert "L_max=3, K_max=2" in rep.summary()


def test_L1_examples():
    fb = FactorBalls(Z2, 6)
    geo = lambda W: fb.length(Z2.evaluate(W)) == len(W)
    assert check_L1(geo, 0, Z2, fb).ok
    missing = lambda W: geo(W) and 0 not in W
    rep = check_L1(missing, 0, Z2, fb)
    assert not rep.ok and rep.witness is not None
    bad = lambda W: True
    assert not check_L1(bad, 0, Z2, fb).ok
    assert check_L1(Dfa.universal(4), 0, Z2, fb).ok is False


def test_Lforall_shortlex_z2(metrics):
    m = metrics("Z2", 8)
    L = lambda W: is_shortlex(W, m)
    rep = check_Lforall(L, m, 6, M=2, representatives=lambda g: [m.geodesic_word(g)])
    assert rep.ok and rep.constant <= 2
    assert "empirical, bound=6" in rep.summary()


def test_Lexists_geo_f2(metrics):
    m = metrics("F2", 6)
    rep = check_Lexists(m.is_geodesic, m, 4)
    assert rep.ok and rep.constant == 1


def test_Lforall_fails_for_full_geo_z2(metrics):
    # with g = h = 1 the bound M(|g|+|h|) is 0, but e1 e2 and e2 e1 are distinct paths
    m = metrics("Z2", 6)
    rep = check_Lforall(m.is_geodesic, m, 3)
    assert not rep.ok and rep.detail == "distinct representatives of one element"


def test_biautomatic_examples(metrics):
    m = metrics("Z", 8)
    assert biautomatic_fellow_check(m.is_geodesic, m, 6).constant == 1
    # L = {ε}: the shift pair (x, x^-1) also gives U = ε, read from 1 against W read from x
    rep = biautomatic_fellow_check(lambda W: len(W) == 0, m, 0)
    assert rep.constant == 1 and rep.witness == ((), 0, 1, ())


def test_biautomatic_brute_on_f2(metrics):
    """Free group: the largest synchronous distance between x W and U = x W y, brute force."""
    m = metrics("F2", 8)
    lengths = bfs_lengths(F2, 8)
    d = dist_from(lengths, F2)
    shifts = [F2.spec.identity] + list(F2.elements)
    worst = 0
    for W in words(4, 3):
        if lengths[F2.evaluate(W)] != len(W):
            continue
        for x in shifts:
            for y in shifts:
                g = F2.spec.multiply(F2.spec.multiply(x, F2.evaluate(W)), y)
                U = m.geodesic_word(g)
                p, q = path_vertices(U, F2), path_vertices(W, F2, x)
                n = max(len(p), len(q))
                worst = max(worst, max(d(p[min(t, len(p) - 1)], q[min(t, len(q) - 1)]) for t in range(n)))
    assert biautomatic_fellow_check(m.is_geodesic, m, 3).constant == worst


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=6), st.lists(st.integers(0, 3), max_size=6))
def test_async_symmetric(U, V):
    m = F2_FAST
    assert async_constant(tuple(U), tuple(V), m) == async_constant(tuple(V), tuple(U), m)

from itertools import product

import pytest

from brute import bfs_lengths, cyclic_free_reduce, free_conjugate, words
from relhyp import catalog
from relhyp.conjugacy import (ConjugacySolver, are_conjugate, bcd_report, bench, build_phi, check_bcd, check_nsc,
                              class_key, conjugate_exact, cyclic_reduce_element, decide_conjugacy,
                              loglog_exponent, min_conj_length, nsc_report, random_conjugate_pair, reduce)
from relhyp.errors import OutOfRangeError, SoundnessAlert
from relhyp.factorize import factorize, has_parabolic_shortening
from relhyp.metric import FactorBalls, Metric

F2 = catalog.free_group()
FT = catalog.f2_plus_t()
Z2 = catalog.free_abelian()
ZZ = catalog.z2_star_z()

FREE = {0: "a", 1: "b", 2: "A", 3: "B"}
FT_STR = {0: "a", 1: "b", 2: "ab", 3: "A", 4: "B", 5: "BA"}


def as_string(W, table):
    return "".join(table[x] for x in W)


def w(X, t):
    return X.parse_word(t)


@pytest.fixture(scope="module")
def setups(metrics):
    out = {}
    for name in catalog.TEST_GROUPS:
        m = metrics(name, 6)
        out[name] = (m, build_phi(m.X, m, 6))
    return out


def test_conjugate_exact_examples():
    s = F2.spec
    e = lambda t: F2.evaluate(w(F2, t))
    g = e("a b b a^-1 b")
    assert conjugate_exact(g, g, s).is_identity
    c = conjugate_exact(e("a b"), e("b a"), s)
    assert c == e("a")
    assert conjugate_exact(e("a b"), e("a b^-1"), s) is None


def test_conjugate_exact_against_ball_search():
    """c^-1 g c = h, with the conjugator sought directly among all elements of the radius-4 ball."""
    s = F2.spec
    ball = list(bfs_lengths(F2, 4))
    elems = [F2.evaluate(W) for W in words(4, 3)]
    for g, h in product(sorted(set(elems))[:40], repeat=2):
        c = conjugate_exact(g, h, s)
        found = any(s.conjugate(g, x) == h for x in ball)
        if c is not None:
            assert s.conjugate(g, c) == h
        else:
            assert not found


def test_conjugate_exact_matches_free_oracle():
    for U, V in product(list(words(4, 4))[::5], repeat=2):
        truth = free_conjugate(as_string(U, FREE), as_string(V, FREE))
        assert are_conjugate(F2.evaluate(U), F2.evaluate(V), F2.spec) == truth


def test_cyclic_reduce_and_class_key():
    s = F2.spec
    g = F2.evaluate(w(F2, "b a b b^-1 a^-1 b^-1 a"))
    r, c = cyclic_reduce_element(g, s)
    assert s.conjugate(g, c) == r or s.conjugate(r, c) == g
    assert class_key(g, s) == class_key(F2.evaluate(w(F2, "a")), s)


def test_min_conj_length_examples(metrics):
    assert min_conj_length(F2.evaluate(w(F2, "a b a^-1")), metrics("F2")) == 1
    assert min_conj_length(Z2.spec.element(0, (3, -2)), metrics("Z2")) == 5
    g = ZZ.spec.from_syllables([(0, (1, 0)), (1, (1,)), (0, (-1, 0))])
    assert min_conj_length(g, metrics("Z2*Z")) == 1


def test_min_conj_length_f2_plus_t_brute(metrics):
    """Class minimum by search over conjugates by all ball elements up to length 3."""
    m = metrics("F2+t", 6)
    lengths = m.ball.lengths
    for W in words(6, 3):
        g = FT.evaluate(W)
        brute = min(lengths.get(FT.spec.conjugate(g, c), 99) for c in m.ball.elements(3))
        assert min_conj_length(g, m) == brute


def test_min_conj_length_out_of_range(metrics):
    small = Metric.build(FT, 2)
    g = FT.evaluate(w(FT, "a a b b a a b b"))
    with pytest.raises(OutOfRangeError):
        min_conj_length(g, small)


def test_phi_examples(setups):
    assert len(setups["F2"][1]) == 0
    assert len(setups["Z2*Z"][1]) == 0
    phi = setups["F2+t"][1]
    assert phi.words[w(FT, "a b")] == w(FT, "t")


def test_phi_members_are_minimal_non_geodesics(setups):
    m, phi = setups["F2+t"]
    fb = FactorBalls(FT, 6)
    for W, V in phi.words.items():
        assert not m.is_geodesic(W)
        assert m.is_geodesic(W[1:]) and m.is_geodesic(W[:-1])
        assert not has_parabolic_shortening(factorize(W, FT), FT, fb)
        assert len(V) < len(W) and FT.evaluate(V) == FT.evaluate(W)


def test_reduce_examples(setups):
    m, phi = setups["F2"]
    assert reduce(w(F2, "a b a^-1"), F2, m, phi).word == w(F2, "b")
    m, phi = setups["Z2"]
    assert reduce(w(Z2, "e1 e1^-1 e2"), Z2, m, phi).word == w(Z2, "e2")
    m, phi = setups["F2+t"]
    assert reduce(w(FT, "b a"), FT, m, phi).word == w(FT, "t")


def test_reduce_warns_beyond_phi_bound(setups):
    m, phi = setups["F2+t"]
    res = reduce(w(FT, "a b a b a b a b"), FT, m, phi)
    assert any(x.startswith("incomplete-phi") for x in res.warnings)


@pytest.mark.parametrize("name", catalog.TEST_GROUPS)
def test_reduce_preserves_class_and_never_grows(name, setups):
    m, phi = setups[name]
    X = m.X
    s = X.spec
    n = 5 if len(X) <= 4 else 4
    for W in words(len(X), n):
        res = reduce(W, X, m, phi)
        assert len(res.word) <= len(W)
        g, h = X.evaluate(W), X.evaluate(res.word)
        assert s.conjugate(g, X.evaluate(res.conjugator)) == h


@pytest.mark.parametrize("name", ["F2+t", "Z2*Z", "F2"])
def test_trivial_iff_empty(name, setups):
    """Words with no parabolic shortening and no Φ subword are trivial only when empty."""
    m, phi = setups[name]
    X = m.X
    fb = FactorBalls(X, 6)
    for W in words(len(X), 5 if len(X) <= 4 else 4):
        if has_parabolic_shortening(factorize(W, X), X, fb):
            continue
        if any(W[i:j] in phi for i in range(len(W)) for j in range(i + 2, len(W) + 1)):
            continue
        assert X.evaluate(W).is_identity == (len(W) == 0)


def test_decide_examples(setups):
    m, phi = setups["F2"]
    # a b a^-1 b is cyclically reduced of length 4, so it is not conjugate to b b
    assert decide_conjugacy(w(F2, "a b a^-1 b"), w(F2, "b b"), F2, m, phi, 0) is None
    assert not free_conjugate("abAb", "bb")
    U = w(F2, "a b b a^-1")
    Z_ = decide_conjugacy(U, w(F2, "b b"), F2, m, phi, 0)
    assert F2.spec.conjugate(F2.evaluate(U), F2.evaluate(Z_)) == F2.evaluate(w(F2, "b b"))
    Wd = w(F2, "a b a^-1 b")
    assert decide_conjugacy(Wd, Wd, F2, m, phi, 0) == ()
    assert decide_conjugacy(w(F2, "a"), w(F2, "b"), F2, m, phi, 0) is None
    assert decide_conjugacy(w(F2, "a b a^-1"), w(F2, "b"), F2, m, phi, 0) == w(F2, "a")


@pytest.mark.parametrize("name,table", [("F2", FREE), ("F2+t", FT_STR)])
def test_decide_matches_free_oracle(name, table, setups):
    m, phi = setups[name]
    X = m.X
    solver = ConjugacySolver(X, m, phi, 0)
    ws = list(words(len(X), 3))
    for U, V in product(ws, repeat=2):
        v = solver.decide(U, V)
        assert v.conjugate == free_conjugate(as_string(U, table), as_string(V, table))
        if v.conjugate:
            assert X.spec.conjugate(X.evaluate(U), X.evaluate(v.conjugator)) == X.evaluate(V)


@pytest.mark.parametrize("name", ["Z2", "Z2*Z"])
def test_decide_matches_exact_oracle(name, setups):
    m, phi = setups[name]
    X = m.X
    solver = ConjugacySolver(X, m, phi, 0)
    ws = list(words(len(X), 3 if len(X) <= 4 else 2))
    for U, V in product(ws, repeat=2):
        solver.decide(U, V, verify=True)


def test_prefilter_does_not_change_verdicts(setups):
    m, phi = setups["F2+t"]
    solver = ConjugacySolver(FT, m, phi, 1)
    ws = list(words(6, 2))
    for U, V in product(ws, repeat=2):
        a, b = solver.decide(U, V, prefilter=True), solver.decide(U, V, prefilter=False)
        assert a.conjugate == b.conjugate and a.conjugator == b.conjugator


def test_soundness_alert_on_bad_phi(setups):
    m, _ = setups["F2+t"]
    empty = build_phi(FT, m, 1)
    solver = ConjugacySolver(FT, m, empty, 0)
    with pytest.raises(SoundnessAlert):
        for U, V in product(list(words(6, 2)), repeat=2):
            solver.decide(U, V, verify=True)


def test_verdict_summary(setups):
    m, phi = setups["F2"]
    v = ConjugacySolver(F2, m, phi, 0).decide(w(F2, "a b a^-1"), w(F2, "b"))
    lines = v.summary(F2).splitlines()
    assert lines[0] == "conjugate, conjugator=a"
    assert lines[2].startswith("method: ") and "B=0 (empirical)" in lines[2]


def test_bound_must_fit_ball(setups):
    m, phi = setups["F2"]
    with pytest.raises(OutOfRangeError):
        ConjugacySolver(F2, m, phi, m.radius + 1)


def test_bcd_examples(setups):
    for name in ("Z2", "F2"):
        m, _ = setups[name]
        assert check_bcd(m.X, m, 6, 6) == 0
    assert "k=0 (empirical, L_max=6" in bcd_report(Z2, setups["Z2"][0], 6, 6).summary()


def test_nsc_f2_plus_t(setups):
    m, _ = setups["F2+t"]
    B = check_nsc(FT, m, 6, 6)
    assert B is not None and B <= 2
    assert nsc_report(FT, m, 6, 6).summary().startswith(f"B={B} (empirical")


def test_bench_reports_exponent(setups):
    m, phi = setups["F2+t"]
    res = bench(ConjugacySolver(FT, m, phi, 0), sizes=(20, 40, 80), trials=2)
    assert len(res.sizes) == 3 and res.exponent < 4
    assert res.to_csv().splitlines()[0] == "n,trial,seconds,conjugate"
    assert abs(loglog_exponent([1, 2, 4], [1, 8, 64]) - 3) < 1e-9


def test_random_conjugate_pair_is_conjugate():
    import random

    rng = random.Random(3)
    for n in (5, 10, 30):
        U, V = random_conjugate_pair(FT, n, rng)
        assert are_conjugate(FT.evaluate(U), FT.evaluate(V), FT.spec)

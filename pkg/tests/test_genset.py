import pytest

from brute import bfs_lengths
from relhyp import catalog
from relhyp.errors import AlphabetError
from relhyp.genset import ball_enlarge, parabolic_enlarge, theta
from relhyp.metric import FactorBalls, Metric, build_ball

Z = catalog.integers()
Z2 = catalog.free_abelian()
F2 = catalog.free_group()
ZZ = catalog.z2_star_z()


def test_ball_enlarge_examples():
    X = ball_enlarge(Z, 2, build_ball(Z, 2))
    assert sorted(g.syllables[0][1][0] for g in X.elements) == [-2, -1, 1, 2]
    assert ball_enlarge(F2, 1, build_ball(F2, 1)) == F2
    assert len(ball_enlarge(Z2, 2, build_ball(Z2, 2))) == 12


def test_ball_enlarge_rejects_zero():
    with pytest.raises(AlphabetError):
        ball_enlarge(F2, 0, build_ball(F2, 1))


def test_ball_enlarge_tags_single_syllables():
    X = ball_enlarge(F2, 2, build_ball(F2, 2))
    for g, tag in zip(X.elements, X.tags):
        assert (tag is not None) == (len(g.syllables) == 1)


@pytest.mark.parametrize("name,m", [("Z2", 2), ("F2", 2), ("Z2", 3)])
def test_ball_enlarge_length_bounds(name, m):
    X = catalog.by_name(name)
    ball = build_ball(X, 6)
    Zm = ball_enlarge(X, m, ball)
    new = bfs_lengths(Zm, 3)
    for g, k in ball.lengths.items():
        if g in new:
            assert k // m - 1 <= new[g] <= -(-k // m)


def test_parabolic_enlarge_examples():
    assert parabolic_enlarge(ZZ, 1) == ZZ
    X = parabolic_enlarge(ZZ, 2)
    gained = set(X.elements) - set(ZZ.elements)
    assert len({g for g in gained if g.syllables[0][0] == 0}) == 8
    assert {g.syllables[0][1] for g in gained if g.syllables[0][0] == 1} == {(2,), (-2,)}
    X3 = parabolic_enlarge(F2, 3)
    for omega in (0, 1):
        vals = sorted(g.syllables[0][1][0] for g in X3.elements if g.syllables[0][0] == omega)
        assert vals == [-3, -2, -1, 1, 2, 3]
    assert all(t is not None for t in X.tags)


def test_parabolic_enlarge_generating_set_lemma():
    X = parabolic_enlarge(ZZ, 2)
    ball = build_ball(X, 3)
    fb = FactorBalls(X, 5)
    for g, k in ball.lengths.items():
        if len(g.syllables) == 1:
            assert fb.length(g) == k


def test_theta_examples():
    fb = FactorBalls(ZZ, 4)
    assert theta(ZZ, 1, fb) == set(ZZ.elements)
    assert theta(ZZ, 0, fb) == set()
    assert len(theta(ZZ, 2, fb)) == 16
    assert theta(ZZ, 2, ball=build_ball(ZZ, 2)) == theta(ZZ, 2, fb)

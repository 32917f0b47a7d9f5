"""Exhaustive word enumerators shared by the checkers.

All enumerators yield ``(word, element)`` pairs in lexicographic order of
letter indices and evaluate incrementally, so no word is multiplied out
twice.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Tuple

from .group import GroupElement, MarkedAlphabet, Word
from .metric import Metric


def all_words(X: MarkedAlphabet, n: int) -> Iterator[Word]:
    """Every word of length exactly ``n``."""
    return product(range(len(X)), repeat=n)


def words_upto(X: MarkedAlphabet, n: int) -> Iterator[Word]:
    for m in range(n + 1):
        yield from all_words(X, m)


def geodesic_words(metric: Metric, n: int, exact: bool = False) -> Iterator[Tuple[Word, GroupElement]]:
    """Geodesic words of length ``n`` (or at most ``n``), depth first."""
    X = metric.X
    mul, elems = X.spec.multiply, X.elements
    length = metric.length_or_none
    word = []

    def rec(g, m):
        if not exact or m == n:
            yield tuple(word), g
        if m == n:
            return
        for i, x in enumerate(elems):
            h = mul(g, x)
            if length(h) == m + 1:
                word.append(i)
                yield from rec(h, m + 1)
                word.pop()

    yield from rec(X.spec.identity, 0)


def minimal_non_geodesics(metric: Metric, L_max: int) -> Iterator[Tuple[Word, GroupElement]]:
    """Non-geodesic words every proper subword of which is geodesic."""
    X = metric.X
    mul, inv, elems = X.spec.multiply, X.spec.invert, X.elements
    inv_elems = [inv(x) for x in elems]
    length = metric.length_or_none
    for P, g in geodesic_words(metric, L_max - 1):
        m = len(P) + 1
        if m < 2:
            continue
        head = inv_elems[P[0]]
        for i, x in enumerate(elems):
            h = mul(g, x)
            if length(h) == m:
                continue
            if length(mul(head, h)) == m - 1:
                yield P + (i,), h

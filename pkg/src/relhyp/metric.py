"""Word metrics: BFS balls, geodesic tests and geodesic enumeration.

A :class:`BallTable` is the exact length oracle for one alphabet up to a
radius. For purely parabolic alphabets over a free product the length of an
element is the sum of the factor lengths of its syllables; :class:`FactorBalls`
supplies those per-factor lengths and grows its tables on demand.
:class:`Metric` bundles both behind one ``length`` call.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from .errors import CacheError, CapacityError, OutOfRangeError, PreconditionError
from .group import IDENTITY, GroupElement, MarkedAlphabet, Word

DEFAULT_MAX_ELEMENTS = 4_000_000


class BallTable:
    """Exact word lengths for every element of X-length at most ``radius``."""

    __slots__ = ("alphabet", "radius", "lengths", "spheres")

    def __init__(self, alphabet: MarkedAlphabet, radius: int, lengths: dict, spheres: list):
        self.alphabet = alphabet
        self.radius = radius
        self.lengths = lengths
        self.spheres = spheres

    def __contains__(self, g):
        return g in self.lengths

    def __len__(self):
        return len(self.lengths)

    def length(self, g: GroupElement) -> int:
        try:
            return self.lengths[g]
        except KeyError:
            raise OutOfRangeError(f"{g} lies outside the radius-{self.radius} ball") from None

    def sphere_sizes(self) -> List[int]:
        return [len(s) for s in self.spheres]

    def elements(self, max_length: Optional[int] = None) -> Iterator[GroupElement]:
        top = self.radius if max_length is None else min(max_length, self.radius)
        for k in range(top + 1):
            yield from self.spheres[k]

    def truncate(self, radius: int) -> "BallTable":
        if radius >= self.radius:
            return self
        spheres = self.spheres[: radius + 1]
        lengths = {g: k for k, s in enumerate(spheres) for g in s}
        return BallTable(self.alphabet, radius, lengths, spheres)


def build_ball(X: MarkedAlphabet, R: int, start: Optional[BallTable] = None,
               max_elements: int = DEFAULT_MAX_ELEMENTS) -> BallTable:
    """Breadth-first enumeration of the radius-``R`` ball of (G, X).

    Passing ``start`` resumes from an existing smaller ball of the same
    alphabet. Raises :class:`CapacityError` (with the largest completed
    radius) when the ball would exceed ``max_elements``.
    """
    if R < 0:
        raise PreconditionError("radius must be nonnegative")
    if start is not None:
        if start.alphabet != X:
            raise PreconditionError("resumed ball belongs to a different alphabet")
        if start.radius >= R:
            return start.truncate(R)
        lengths = dict(start.lengths)
        spheres = list(start.spheres)
    else:
        lengths = {IDENTITY: 0}
        spheres = [[IDENTITY]]
    mul = X.spec.multiply
    letters = X.elements
    for k in range(len(spheres) - 1, R):
        nxt = []
        for g in spheres[k]:
            for x in letters:
                h = mul(g, x)
                if h not in lengths:
                    lengths[h] = k + 1
                    nxt.append(h)
            if len(lengths) > max_elements:
                raise CapacityError(f"ball exceeds {max_elements} elements at radius {k + 1}", completed=k)
        nxt.sort()
        spheres.append(nxt)
    return BallTable(X, R, lengths, spheres)


def sphere_counts(X: MarkedAlphabet, R: int) -> List[int]:
    """Sphere sizes up to radius ``R`` from a layered BFS holding three spheres at a time.

    For an inverse-closed alphabet every neighbour of the sphere of radius
    k lies at distance k - 1, k or k + 1, so older spheres can be dropped.
    """
    if not X.inverse_closed:
        raise PreconditionError("layered BFS needs an inverse-closed alphabet")
    mul = X.spec.multiply
    letters = X.elements
    older, current = set(), {IDENTITY}
    counts = [1]
    for _ in range(R):
        nxt = set()
        for g in current:
            for x in letters:
                h = mul(g, x)
                if h not in current and h not in older:
                    nxt.add(h)
        counts.append(len(nxt))
        older, current = current, nxt
    return counts


class FactorBalls:
    """Per-factor balls over ``X ∩ H_omega``, grown lazily up to ``max_radius``."""

    def __init__(self, X: MarkedAlphabet, radius: int = 4, max_radius: int = 1024,
                 max_elements: int = DEFAULT_MAX_ELEMENTS):
        self.alphabet = X
        self.max_radius = max_radius
        self.max_elements = max_elements
        self.subalphabets: Dict[int, tuple] = {}
        self.balls: Dict[int, BallTable] = {}
        self._geo_words: Dict[GroupElement, Word] = {}
        for omega in range(len(X.spec.factors)):
            sub, idx = X.factor_alphabet(omega)
            if len(sub):
                self.subalphabets[omega] = (sub, idx)
                self.balls[omega] = build_ball(sub, radius, max_elements=max_elements)

    def __getitem__(self, omega: int) -> BallTable:
        return self.balls[omega]

    def __contains__(self, omega):
        return omega in self.balls

    def factors(self):
        return sorted(self.balls)

    def grow(self, omega: int, radius: int) -> BallTable:
        ball = self.balls[omega]
        if radius > ball.radius:
            ball = build_ball(ball.alphabet, radius, start=ball, max_elements=self.max_elements)
            self.balls[omega] = ball
        return ball

    def length(self, h: GroupElement) -> int:
        """``|h|_{X ∩ H_omega}`` for an element of a single factor."""
        if h.is_identity:
            return 0
        if len(h.syllables) != 1:
            raise PreconditionError(f"{h} is not a factor element")
        omega = h.syllables[0][0]
        if omega not in self.balls:
            raise OutOfRangeError(f"no letters of X lie in factor {omega}")
        ball = self.balls[omega]
        while True:
            k = ball.lengths.get(h)
            if k is not None:
                return k
            if ball.radius >= self.max_radius:
                raise OutOfRangeError(f"{h} beyond factor radius {self.max_radius}")
            ball = self.grow(omega, min(self.max_radius, max(2 * ball.radius, ball.radius + 4)))

    def ball(self, omega: int, radius: int) -> BallTable:
        """The factor ball of at least ``radius`` (grown if needed)."""
        return self.grow(omega, radius)

    def geodesic_word(self, h: GroupElement) -> Word:
        """Lex-least geodesic over ``X ∩ H_omega`` for ``h``, as parent indices."""
        if h.is_identity:
            return ()
        hit = self._geo_words.get(h)
        if hit is not None:
            return hit
        omega = h.syllables[0][0]
        self.length(h)
        sub, idx = self.subalphabets[omega]
        word = tuple(idx[i] for i in geodesic_word(h, self.balls[omega]))
        self._geo_words[h] = word
        return word


class Metric:
    """Length oracle for one alphabet: BFS ball plus optional syllable fast path."""

    def __init__(self, X: MarkedAlphabet, ball: Optional[BallTable] = None,
                 factor_balls: Optional[FactorBalls] = None):
        self.X = X
        self.ball = ball
        self.factor_balls = factor_balls
        self._mul = X.spec.multiply
        self._inv = X.spec.invert
        self._fast = X.is_parabolic and factor_balls is not None

    @classmethod
    def build(cls, X: MarkedAlphabet, radius: int, factor_radius: Optional[int] = None):
        ball = build_ball(X, radius)
        fb = FactorBalls(X, factor_radius if factor_radius is not None else radius) if X.is_parabolic else None
        return cls(X, ball, fb)

    @property
    def radius(self) -> int:
        return self.ball.radius if self.ball is not None else -1

    def length(self, g: GroupElement) -> int:
        if self.ball is not None:
            k = self.ball.lengths.get(g)
            if k is not None:
                return k
        if self._fast:
            fb = self.factor_balls
            return sum(fb.length(GroupElement((s,))) for s in g.syllables)
        raise OutOfRangeError(f"{g} lies outside the radius-{self.radius} ball and X is not parabolic")

    def length_or_none(self, g: GroupElement) -> Optional[int]:
        try:
            return self.length(g)
        except OutOfRangeError:
            return None

    def dist(self, g: GroupElement, h: GroupElement) -> int:
        return self.length(self._mul(self._inv(g), h))

    def is_geodesic(self, word: Word) -> bool:
        return len(word) == self.length(self.X.evaluate(word))

    def geodesics(self, g: GroupElement, limit: Optional[int] = None) -> List[Word]:
        """All geodesic words for ``g`` in lexicographic (letter index) order."""
        n = self.length(g)
        mul, length = self._mul, self.length
        inv_letters = [self._inv(x) for x in self.X.elements]
        out: List[Word] = []
        prefix: List[int] = []

        def rec(rest: GroupElement, remaining: int):
            if limit is not None and len(out) >= limit:
                return
            if remaining == 0:
                out.append(tuple(prefix))
                return
            for i, xi in enumerate(inv_letters):
                r = mul(xi, rest)
                k = self.length_or_none(r)
                if k == remaining - 1:
                    prefix.append(i)
                    rec(r, remaining - 1)
                    prefix.pop()

        rec(g, n)
        return out

    def geodesic_word(self, g: GroupElement) -> Word:
        """The lex-least geodesic word representing ``g``."""
        return self.geodesics(g, limit=1)[0]


def word_length(g: GroupElement, ball: BallTable, factor_balls: Optional[FactorBalls] = None) -> int:
    return Metric(ball.alphabet, ball, factor_balls).length(g)


def is_geodesic(word: Word, ball: BallTable, factor_balls: Optional[FactorBalls] = None) -> bool:
    return Metric(ball.alphabet, ball, factor_balls).is_geodesic(word)


def enumerate_geodesics(g: GroupElement, ball: BallTable,
                        factor_balls: Optional[FactorBalls] = None) -> List[Word]:
    return Metric(ball.alphabet, ball, factor_balls).geodesics(g)


def geodesic_word(g: GroupElement, ball: BallTable) -> Word:
    return Metric(ball.alphabet, ball).geodesic_word(g)


# -- binary cache ------------------------------------------------------------

MAGIC = b"GWB1"
_HEADER = struct.Struct("<4sH32sIQ")
_CACHE_VERSION = 1


def save_ball(ball: BallTable, path) -> None:
    """Write ``ball`` atomically: header (magic, version, alphabet hash, radius, count) then elements."""
    X = ball.alphabet
    dims = [f.dim for f in X.spec.factors]
    path = Path(path)
    chunks = [_HEADER.pack(MAGIC, _CACHE_VERSION, X.digest(), ball.radius, len(ball))]
    for k, sphere in enumerate(ball.spheres):
        for g in sphere:
            chunks.append(struct.pack("<HH", k, len(g.syllables)))
            for omega, vec in g.syllables:
                try:
                    chunks.append(struct.pack(f"<H{dims[omega]}q", omega, *vec))
                except struct.error as exc:
                    raise CacheError(f"coordinate of {g} does not fit in 64 bits") from exc
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(b"".join(chunks))
    tmp.replace(path)


def read_ball_header(path) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) != _HEADER.size:
        raise CacheError(f"{path}: truncated header")
    magic, version, digest, radius, count = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise CacheError(f"{path}: bad magic {magic!r}")
    return {"version": version, "digest": digest, "radius": radius, "count": count}


def load_ball(path, X: MarkedAlphabet) -> BallTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheError(f"{path}: truncated header")
    magic, version, digest, radius, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC or version != _CACHE_VERSION:
        raise CacheError(f"{path}: not a version-{_CACHE_VERSION} GWB1 file")
    if digest != X.digest():
        raise CacheError(f"{path}: cached for a different alphabet")
    dims = [f.dim for f in X.spec.factors]
    pos = _HEADER.size
    spheres: List[list] = [[] for _ in range(radius + 1)]
    lengths = {}
    for _ in range(count):
        k, nsyl = struct.unpack_from("<HH", data, pos)
        pos += 4
        syl = []
        for _ in range(nsyl):
            (omega,) = struct.unpack_from("<H", data, pos)
            vec = struct.unpack_from(f"<{dims[omega]}q", data, pos + 2)
            pos += 2 + 8 * dims[omega]
            syl.append((omega, tuple(vec)))
        g = GroupElement(tuple(syl))
        lengths[g] = k
        spheres[k].append(g)
    if pos != len(data):
        raise CacheError(f"{path}: trailing bytes")
    return BallTable(X, radius, lengths, spheres)


def cached_ball(X: MarkedAlphabet, R: int, cache_dir) -> BallTable:
    """Reuse a cached ball only when alphabet hash matches and radius suffices."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{X.digest().hex()[:16]}.gwb"
    if path.exists():
        try:
            head = read_ball_header(path)
            if head["digest"] == X.digest() and head["radius"] >= R:
                return load_ball(path, X).truncate(R)
        except CacheError:
            pass
    ball = build_ball(X, R)
    save_ball(ball, path)
    return ball

"""Free products of finitely generated abelian groups.

An element is stored in free-product normal form: an alternating tuple of
syllables ``(omega, vector)`` where ``omega`` indexes a factor and
``vector`` holds the free coordinates followed by the torsion residues.
No syllable is the factor identity and adjacent syllables lie in different
factors, so equality of normal forms is equality in the group.

Words are plain tuples of letter indices into a :class:`MarkedAlphabet`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import AlphabetError, MalformedElementError

Word = tuple  # tuple[int, ...] of letter indices


@dataclass(frozen=True)
class AbelianFactor:
    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.rank < 0:
            raise MalformedElementError(f"negative rank {self.rank}")
        if any(m < 2 for m in self.torsion):
            raise MalformedElementError(f"torsion moduli must be >= 2, got {self.torsion}")

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    def reduce(self, vec: Iterable[int]) -> tuple:
        vec = tuple(int(v) for v in vec)
        if len(vec) != self.dim:
            raise MalformedElementError(f"vector {vec} has length {len(vec)}, expected {self.dim}")
        if not self.torsion:
            return vec
        r = self.rank
        return vec[:r] + tuple(v % m for v, m in zip(vec[r:], self.torsion))

    def add(self, u: tuple, v: tuple) -> tuple:
        s = tuple(a + b for a, b in zip(u, v))
        if self.torsion:
            r = self.rank
            s = s[:r] + tuple(x % m for x, m in zip(s[r:], self.torsion))
        return s

    def neg(self, u: tuple) -> tuple:
        s = tuple(-a for a in u)
        if self.torsion:
            r = self.rank
            s = s[:r] + tuple(x % m for x, m in zip(s[r:], self.torsion))
        return s


class GroupElement:
    """Immutable normal form; hashable and totally ordered (for sorting)."""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Sequence = ()):
        self.syllables = tuple(syllables)
        self._hash = hash(self.syllables)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.syllables == other.syllables

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self.syllables), self.syllables) < (len(other.syllables), other.syllables)

    def __len__(self):
        return len(self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __repr__(self):
        if not self.syllables:
            return "GroupElement(1)"
        return "GroupElement(" + "".join(f"[{w}:{','.join(map(str, v))}]" for w, v in self.syllables) + ")"

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def to_json(self) -> list:
        return [[w, list(v)] for w, v in self.syllables]


IDENTITY = GroupElement()


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise MalformedElementError("a group needs at least one factor")

    @property
    def identity(self) -> GroupElement:
        return IDENTITY

    def element(self, omega: int, vec: Iterable[int]) -> GroupElement:
        """The element of factor ``omega`` with coordinates ``vec``."""
        self._check_factor(omega)
        v = self.factors[omega].reduce(vec)
        if not any(v):
            return IDENTITY
        return GroupElement(((omega, v),))

    def from_syllables(self, syllables: Iterable) -> GroupElement:
        """Canonicalize an arbitrary syllable list (adjacent repeats allowed)."""
        g = IDENTITY
        for omega, vec in syllables:
            g = self.multiply(g, self.element(omega, vec))
        return g

    def _check_factor(self, omega):
        if not (isinstance(omega, int) and 0 <= omega < len(self.factors)):
            raise MalformedElementError(f"factor index {omega!r} out of range 0..{len(self.factors) - 1}")

    def validate(self, a: GroupElement) -> None:
        prev = None
        for omega, vec in a.syllables:
            self._check_factor(omega)
            f = self.factors[omega]
            if f.reduce(vec) != tuple(vec) or not any(vec):
                raise MalformedElementError(f"syllable {(omega, vec)} is not canonical")
            if omega == prev:
                raise MalformedElementError(f"adjacent syllables in factor {omega}")
            prev = omega

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        sa, sb = a.syllables, b.syllables
        if not sa:
            return b
        if not sb:
            return a
        i, j = len(sa), 0
        factors = self.factors
        while i > 0 and j < len(sb) and sa[i - 1][0] == sb[j][0]:
            omega = sb[j][0]
            if omega >= len(factors) or omega < 0:
                self._check_factor(omega)
            v = factors[omega].add(sa[i - 1][1], sb[j][1])
            if any(v):
                return GroupElement(sa[: i - 1] + ((omega, v),) + sb[j + 1 :])
            i -= 1
            j += 1
        return GroupElement(sa[:i] + sb[j:])

    def invert(self, a: GroupElement) -> GroupElement:
        factors = self.factors
        return GroupElement(tuple((w, factors[w].neg(v)) for w, v in reversed(a.syllables)))

    def conjugate(self, g: GroupElement, c: GroupElement) -> GroupElement:
        """``c^-1 g c``."""
        return self.multiply(self.multiply(self.invert(c), g), c)

    def to_json(self) -> list:
        return [{"rank": f.rank, "torsion": list(f.torsion)} for f in self.factors]


def multiply(a: GroupElement, b: GroupElement, spec: GroupSpec) -> GroupElement:
    return spec.multiply(a, b)


def invert(a: GroupElement, spec: GroupSpec) -> GroupElement:
    return spec.invert(a)


def syllable_count(a: GroupElement) -> int:
    """Relative length over the union of all nontrivial factor elements."""
    return len(a.syllables)


@dataclass(frozen=True)
class Letter:
    symbol: str
    element: GroupElement
    parabolic: Optional[int] = None


class MarkedAlphabet:
    """An ordered, finite generating set; letter index order is the lex order.

    Letters whose element is a single syllable are tagged with that factor
    whether or not the caller supplied a tag, so factorizations can work on
    tags alone. A declared tag that disagrees with the element is an error.
    """

    def __init__(self, spec: GroupSpec, letters: Iterable, close_inverses: bool = False):
        self.spec = spec
        built = []
        for item in letters:
            if isinstance(item, Letter):
                symbol, element, tag = item.symbol, item.element, item.parabolic
            else:
                symbol, element, tag = item
            built.append(self._checked_letter(symbol, element, tag))
        if close_inverses:
            present = {l.element for l in built}
            extra = []
            for l in built:
                inv = spec.invert(l.element)
                if inv not in present:
                    present.add(inv)
                    extra.append(Letter(l.symbol + "^-1", inv, l.parabolic))
            built.extend(extra)
        self.letters = tuple(built)
        self.symbols = tuple(l.symbol for l in built)
        if len(set(self.symbols)) != len(self.symbols):
            raise AlphabetError(f"duplicate symbols in {self.symbols}")
        for s in self.symbols:
            if not s or any(ch.isspace() for ch in s):
                raise AlphabetError(f"symbol {s!r} must be nonempty without whitespace")
        self.elements = tuple(l.element for l in built)
        self.tags = tuple(l.parabolic for l in built)
        self._index = {s: i for i, s in enumerate(self.symbols)}
        by_elem = {}
        for i, e in enumerate(self.elements):
            by_elem.setdefault(e, i)
        self.inverse = tuple(by_elem.get(spec.invert(e)) for e in self.elements)
        self.inverse_closed = all(i is not None for i in self.inverse)

    def _checked_letter(self, symbol, element, tag):
        self.spec.validate(element)
        if element.is_identity:
            raise AlphabetError(f"letter {symbol!r} is the identity")
        single = element.syllables[0][0] if len(element.syllables) == 1 else None
        if tag is not None and tag != single:
            raise AlphabetError(f"letter {symbol!r} tagged {tag} but element {element} is not in that factor")
        return Letter(symbol, element, single)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, MarkedAlphabet) and self.spec == other.spec and self.letters == other.letters

    def __hash__(self):
        return hash((self.spec, self.letters))

    def __repr__(self):
        return f"MarkedAlphabet({' '.join(self.symbols)})"

    @property
    def is_parabolic(self) -> bool:
        """True when every letter lies in a single factor."""
        return all(t is not None for t in self.tags)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            pass
        if symbol.endswith("^-1"):
            base = self._index.get(symbol[:-3])
            if base is not None and self.inverse[base] is not None:
                return self.inverse[base]
        raise AlphabetError(f"unknown symbol {symbol!r}")

    def parse_word(self, text) -> Word:
        if isinstance(text, (tuple, list)):
            return tuple(self.index(s) if isinstance(s, str) else int(s) for s in text)
        return tuple(self.index(s) for s in text.split())

    def format_word(self, word: Word) -> str:
        return " ".join(self.symbols[i] for i in word)

    def evaluate(self, word: Word) -> GroupElement:
        g = IDENTITY
        mul = self.spec.multiply
        elements = self.elements
        for i in word:
            g = mul(g, elements[i])
        return g

    def inverse_word(self, word: Word) -> Word:
        inv = self.inverse
        if not self.inverse_closed:
            raise AlphabetError("alphabet is not inverse-closed")
        return tuple(inv[i] for i in reversed(word))

    def factor_letters(self, omega: int) -> tuple:
        return tuple(i for i, t in enumerate(self.tags) if t == omega)

    def factor_alphabet(self, omega: int) -> tuple:
        """``(sub_alphabet, parent_indices)`` for the letters tagged ``omega``."""
        idx = self.factor_letters(omega)
        sub = MarkedAlphabet(self.spec, [self.letters[i] for i in idx])
        return sub, idx

    def to_json(self) -> list:
        return [{"symbol": l.symbol, "element": l.element.to_json(), "parabolic": l.parabolic} for l in self.letters]

    def digest(self) -> bytes:
        """SHA-256 of the canonical (spec, letters) description."""
        payload = json.dumps({"factors": self.spec.to_json(), "letters": self.to_json()}, sort_keys=True)
        return hashlib.sha256(payload.encode()).digest()


def evaluate(word: Word, X: MarkedAlphabet, spec: Optional[GroupSpec] = None) -> GroupElement:
    return X.evaluate(word)

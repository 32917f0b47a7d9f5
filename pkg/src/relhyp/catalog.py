"""Ready-made groups and alphabets used throughout the tests and demos.

=========  ===========================  ======================================
name       group                        alphabet (index order = lex order)
=========  ===========================  ======================================
``Z``      Z                            x, x^-1
``Z2``     Z^2                          e1, e2, e1^-1, e2^-1
``F2``     Z * Z                        a, b, a^-1, b^-1
``Z2*Z``   Z^2 * Z                      e1, e2, t, e1^-1, e2^-1, t^-1
``F2+t``   Z * Z                        a, b, t=ab, a^-1, b^-1, t^-1
=========  ===========================  ======================================
"""

from __future__ import annotations

from .group import AbelianFactor, GroupSpec, MarkedAlphabet

TEST_GROUPS = ("Z", "Z2", "F2", "Z2*Z", "F2+t")


def integers() -> MarkedAlphabet:
    spec = GroupSpec((AbelianFactor(1),))
    return MarkedAlphabet(spec, [("x", spec.element(0, (1,)), 0)], close_inverses=True)


def free_abelian(rank: int = 2) -> MarkedAlphabet:
    spec = GroupSpec((AbelianFactor(rank),))
    letters = []
    for i in range(rank):
        v = [0] * rank
        v[i] = 1
        letters.append((f"e{i + 1}", spec.element(0, v), 0))
    return MarkedAlphabet(spec, letters, close_inverses=True)


def free_group(rank: int = 2) -> MarkedAlphabet:
    spec = GroupSpec(tuple(AbelianFactor(1) for _ in range(rank)))
    names = "abcdefgh"
    letters = [(names[i], spec.element(i, (1,)), i) for i in range(rank)]
    return MarkedAlphabet(spec, letters, close_inverses=True)


def z2_star_z() -> MarkedAlphabet:
    spec = GroupSpec((AbelianFactor(2), AbelianFactor(1)))
    letters = [
        ("e1", spec.element(0, (1, 0)), 0),
        ("e2", spec.element(0, (0, 1)), 0),
        ("t", spec.element(1, (1,)), 1),
    ]
    return MarkedAlphabet(spec, letters, close_inverses=True)


def f2_plus_t() -> MarkedAlphabet:
    """F2 on a, b with the extra non-parabolic generator t = ab."""
    spec = GroupSpec((AbelianFactor(1), AbelianFactor(1)))
    a = spec.element(0, (1,))
    b = spec.element(1, (1,))
    letters = [("a", a, 0), ("b", b, 1), ("t", spec.multiply(a, b), None)]
    return MarkedAlphabet(spec, letters, close_inverses=True)


def by_name(name: str) -> MarkedAlphabet:
    builders = {
        "Z": integers,
        "Z2": free_abelian,
        "F2": free_group,
        "Z2*Z": z2_star_z,
        "F2+t": f2_plus_t,
    }
    try:
        return builders[name]()
    except KeyError:
        raise KeyError(f"unknown test group {name!r}; choose from {', '.join(TEST_GROUPS)}") from None

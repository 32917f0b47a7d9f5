"""Word combinatorics for free products of finitely generated abelian groups.

Length oracles, geodesic and normal-form automata, growth series,
fellow-traveller checkers and a bounded-conjugator conjugacy solver,
each cross-checked against exact brute force.
"""

from .errors import (
    AlphabetError,
    CacheError,
    CapacityError,
    MalformedElementError,
    OutOfRangeError,
    PreconditionError,
    RelHypError,
    SoundnessAlert,
)
from .group import AbelianFactor, GroupElement, GroupSpec, Letter, MarkedAlphabet, evaluate, multiply, invert
from .metric import BallTable, FactorBalls, Metric, build_ball

__version__ = "0.1.0"

__all__ = [
    "AbelianFactor", "AlphabetError", "BallTable", "CacheError", "CapacityError", "FactorBalls",
    "GroupElement", "GroupSpec", "Letter", "MalformedElementError", "MarkedAlphabet", "Metric",
    "OutOfRangeError", "PreconditionError", "RelHypError", "SoundnessAlert", "build_ball",
    "evaluate", "invert", "multiply",
]

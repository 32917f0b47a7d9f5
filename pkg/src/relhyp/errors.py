"""Exception hierarchy shared by all relhyp modules.

Every error carries a short machine-readable ``code`` so the command line
can print ``error: <code>: <detail>`` without inspecting exception types.
"""


class RelHypError(Exception):
    code = "error"


class MalformedElementError(RelHypError, ValueError):
    code = "malformed-element"


class AlphabetError(RelHypError, ValueError):
    code = "alphabet"


class OutOfRangeError(RelHypError, LookupError):
    """An element or word falls outside the finite table backing a query."""

    code = "out-of-range"


class CapacityError(RelHypError, MemoryError):
    """A construction exceeded its size budget.

    ``completed`` records how far the construction got (for balls: the
    largest radius whose sphere was fully enumerated).
    """

    code = "capacity"

    def __init__(self, message, completed=None):
        super().__init__(message)
        self.completed = completed


class PreconditionError(RelHypError, ValueError):
    code = "precondition"


class SoundnessAlert(RelHypError, AssertionError):
    """The bounded conjugacy procedure disagreed with the exact oracle."""

    code = "soundness"


class CacheError(RelHypError, IOError):
    code = "cache"

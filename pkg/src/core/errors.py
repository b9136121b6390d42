"""
Errors - Exception hierarchy shared by the computation modules and the CLI
"""


class HomocalcError(Exception):
    """Base class for all homocalc failures"""


class SizeLimitError(HomocalcError, RuntimeError):
    """A group or resolution exceeds a configured size limit"""

    def __init__(self, message: str, degree: int = None, rank: int = None):
        super().__init__(message)
        self.degree = degree
        self.rank = rank


class FeasibilityError(SizeLimitError):
    """A computation would exceed the nonzero-entry budget"""

    def __init__(self, message: str, degree: int = None, rank: int = None, estimate: int = None):
        super().__init__(message, degree, rank)
        self.estimate = estimate


class ParseError(HomocalcError, ValueError):
    """Malformed cycle notation, group expression or coefficient text"""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class HomomorphismError(HomocalcError, ValueError):
    """Generator images that do not extend to a homomorphism"""


class NotNormalError(HomocalcError, ValueError):
    """A subgroup that is not normal where normality is required"""


class UnsupportedResolutionError(HomocalcError, ValueError):
    """An operation requested on a resolution kind that cannot provide it"""


class PreconditionError(HomocalcError, ValueError):
    """Violated input precondition (shapes, primes, relations, ranks)"""

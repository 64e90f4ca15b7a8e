"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`MukaiError`, which is a
``ValueError``.  The CLI maps :class:`CheckFailed` subclasses to exit status 1
(a hypothesis was evaluated and failed) and everything else to exit status 2
(the input itself is unusable).
"""


class MukaiError(ValueError):
    pass


class CheckFailed(MukaiError):
    """A numerical hypothesis was evaluated on valid input and does not hold."""


class InvalidLattice(MukaiError):
    pass


class DimensionMismatch(MukaiError):
    pass


class NotSpherical(MukaiError):
    pass


class ZeroVector(MukaiError):
    pass


class NotCoprime(MukaiError):
    pass


class RangeError(MukaiError):
    pass


class NonPositiveK(CheckFailed):
    pass


class MissingParam(MukaiError):
    pass


class BelowSpherical(MukaiError):
    pass


class IndexOutOfRange(MukaiError):
    pass


class HypothesisFailed(CheckFailed):
    pass


class BudgetExceeded(MukaiError):
    pass


class NotRankOneLattice(MukaiError):
    pass


class NotPureDimensionOne(MukaiError):
    pass


class NonPositiveSquare(MukaiError):
    pass


class NotRankTwo(MukaiError):
    pass


class InvalidCone(MukaiError):
    pass


class RankTooSmall(MukaiError):
    pass


class SearchExhausted(CheckFailed):
    pass


class NoCertificateFound(CheckFailed):
    pass

"""Exception hierarchy.

``InvalidInput`` covers bad user data (CLI exit 65), ``HypothesisViolated``
covers structural hypotheses that fail on the given instance (exit 2), and
``InternalError`` is raised when an invariant the mathematics guarantees is
observed to fail (exit 70).
"""


class BJLabError(Exception):
    pass


class InvalidInput(BJLabError, ValueError):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroVector(InvalidInput):
    pass


class DegenerateBall(InvalidInput):
    pass


class UnboundedBall(InvalidInput):
    pass


class NotAnExtremePoint(InvalidInput):
    pass


class NotProperSubspace(InvalidInput):
    pass


class EmptyCandidateSet(InvalidInput):
    pass


class NotBijective(InvalidInput):
    pass


class HypothesisViolated(BJLabError):
    """A structural hypothesis does not hold for this input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalError(BJLabError, AssertionError):
    pass


class NoSuchSubface(InternalError):
    pass


class ReproductionFailure(InternalError):
    pass

"""Exception hierarchy shared by all qbs modules."""


class QBSError(Exception):
    """Base class for every error raised by the library."""


class InvalidSetting(QBSError, ValueError):
    """Malformed quiver description."""


class DanglingArrow(InvalidSetting):
    pass


class DuplicateVertexId(InvalidSetting):
    pass


class NegativeDimension(InvalidSetting):
    pass


class DimensionVectorMismatch(QBSError, ValueError):
    pass


class EmptyQuiver(QBSError, ValueError):
    pass


class DisconnectedQuiver(QBSError, ValueError):
    pass


class BudgetExceeded(QBSError, RuntimeError):
    """An enumeration hit its configured node or size limit."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EmptySupport(QBSError, ValueError):
    pass


class TooFewVertices(QBSError, ValueError):
    pass


class NotStronglyConnected(QBSError, ValueError):
    pass


class NegativeArrowCount(QBSError, ValueError):
    pass


class InvalidDecomposition(QBSError, ValueError):
    pass


class NotApplicable(QBSError, ValueError):
    """A reduction step cannot be applied; ``reason`` says which condition failed."""

    def __init__(self, vertex, reason):
        super().__init__(f"reduction not applicable at {vertex!r}: {reason}")
        self.vertex = vertex
        self.reason = reason


class NotPrime(QBSError, ValueError):
    pass


class NotReduced(QBSError, ValueError):
    pass


class UnsupportedFamily(QBSError, ValueError):
    pass


class NonPositiveGamma(QBSError, ValueError):
    pass


class NotARoot(QBSError, ValueError):
    pass


class VerificationFailure(QBSError, AssertionError):
    def __init__(self, message, cones=None):
        super().__init__(message)
        self.cones = cones


class UnverifiedFan(QBSError, ValueError):
    pass

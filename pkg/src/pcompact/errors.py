"""Exception hierarchy shared by all solver and certificate modules."""


class PCompactError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(PCompactError):
    pass


class DegreeTooLow(PCompactError):
    pass


class IndexOutOfRange(PCompactError):
    pass


class DimensionCap(PCompactError):
    pass


class Infeasible(PCompactError):
    """Queried point lies outside the span of the generators."""


class NoConvergence(PCompactError):
    """Iteration budget exhausted.  Partial certificates are attached."""

    def __init__(self, message, primal=None, dual=None):
        super().__init__(message)
        self.primal = primal
        self.dual = dual


class NotCovered(PCompactError):
    """A point of K failed the membership test for the candidate hull."""

    def __init__(self, message, point_index=None):
        super().__init__(message)
        self.point_index = point_index


class InvalidCertificate(PCompactError):
    pass


class DivergentSum(PCompactError):
    pass


class MassExhausted(PCompactError):
    """The finite prefix ran out before the next block could be completed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ZeroGenerator(PCompactError):
    pass


class RadiusExceeded(PCompactError):
    pass


class DivergentSeminorm(PCompactError):
    pass

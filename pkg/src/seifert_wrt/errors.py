"""Exception hierarchy.

Everything raised for bad mathematical input derives from :class:`DomainError`
so the command line can map it to exit status 1.
"""


class DomainError(ValueError):
    """Input is well-formed but outside the domain of the computation."""


class NotCoprime(DomainError):
    pass


class FiberTooSmall(DomainError):
    pass


class HomologyConditionFailed(DomainError):
    pass


class TooFewFibers(DomainError):
    pass


class NotCoprimeArgs(DomainError):
    pass


class OutOfRangeLabel(DomainError):
    pass


class KOutOfRange(DomainError):
    pass


class KTooSmall(DomainError):
    pass


class NotUpperHalfPlane(DomainError):
    pass


class UnitCircleInput(DomainError):
    pass


class BoundaryPoint(DomainError):
    pass


class CombinationNotCuspidal(DomainError):
    pass


class NumericalError(ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""


class QuadratureNotConverged(NumericalError):
    pass


class SlowConvergence(NumericalError):
    def __init__(self, message, required_terms=None):
        super().__init__(message)
        self.required_terms = required_terms


class ExtrapolationUnstable(NumericalError):
    pass


class MeanValueNotZero(NumericalError):
    pass

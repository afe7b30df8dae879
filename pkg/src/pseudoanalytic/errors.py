"""Exception types shared across modules."""


class PseudoanalyticError(Exception):
    """Base class for errors raised by this package."""


class ZeroDivisorError(PseudoanalyticError, ZeroDivisionError):
    """A biquaternion (or hyperbolic number) has no inverse."""


class NotInvertibleError(ZeroDivisorError):
    """A field that must be invertible at every node is not."""


class GridTooSmallError(PseudoanalyticError, ValueError):
    pass


class GridMismatchError(PseudoanalyticError, ValueError):
    pass


class DegeneratePairError(PseudoanalyticError, ValueError):
    """Im(conj(F) G) is not positive somewhere on the grid."""


class DependentSetError(PseudoanalyticError, ValueError):
    """A generating set fails the nodewise independence test."""


class NonPositivePermittivityError(PseudoanalyticError, ValueError):
    pass


class NonMonotoneError(PseudoanalyticError, ValueError):
    pass


class NonPositiveFError(PseudoanalyticError, ValueError):
    pass


class OutOfDomainError(PseudoanalyticError, ValueError):
    pass


class DegreeOutOfRangeError(PseudoanalyticError, ValueError):
    pass


class StepTooLargeError(PseudoanalyticError, ValueError):
    pass


class ConfigError(PseudoanalyticError, ValueError):
    pass

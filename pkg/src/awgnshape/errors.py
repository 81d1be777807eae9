"""Exception hierarchy shared by every module."""


class ShapingError(Exception):
    """Base class for all errors raised by awgnshape."""


class UnsupportedSize(ShapingError, ValueError):
    pass


class DimensionMismatch(ShapingError, ValueError):
    pass


class InvalidDimension(ShapingError, ValueError):
    pass


class ZeroEnergy(ShapingError, ValueError):
    pass


class NonPositiveGain(ShapingError, ValueError):
    pass


class InvalidDistribution(ShapingError, ValueError):
    pass


class DegenerateDistribution(ShapingError, ValueError):
    """A strictly positive distribution was required but a zero entry was found."""


class DegenerateConstellation(ShapingError, ValueError):
    pass


class InvalidMatrix(ShapingError, ValueError):
    """Transition matrix is not row-stochastic."""


class SupportMismatch(ShapingError, ValueError):
    pass


class GridMismatch(ShapingError, ValueError):
    pass


class ConvergenceFailure(ShapingError, RuntimeError):
    pass


class NoRoot(ShapingError, ArithmeticError):
    """The power-constraint equation has no solution for the given gain."""


class AllGainsInfeasible(ShapingError, RuntimeError):
    pass

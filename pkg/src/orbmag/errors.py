"""Exception types shared across the package."""


class OrbmagError(Exception):
    """Base class for all package-specific errors."""


class DomainError(OrbmagError):
    """A parameter or argument is outside the function's domain.

    The message names the offending field.
    """


class SingularInput(OrbmagError):
    """Evaluation requested exactly at (or too close to) a pole."""


class WrongFamily(OrbmagError):
    """A free-particle routine was called with a confining potential, or
    a confined-particle routine without one."""


class ConvergenceFailure(OrbmagError):
    """Adaptive quadrature exhausted its budget without meeting tolerance.

    Carries the last report in ``report`` so callers can inspect how far
    the integrator got.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UVDivergent(OrbmagError):
    """The requested integral grows without bound at large frequency; a
    finite answer requires an explicit frequency cutoff."""


class StabilityError(OrbmagError):
    """Monte Carlo step size too coarse for the fastest rate in the problem."""


class NumericalDegeneracy(OrbmagError):
    """A denominator of the closed-form expressions is too close to zero
    for a trustworthy floating-point evaluation."""


class Unsupported(OrbmagError):
    """The requested combination of options has no defined result."""

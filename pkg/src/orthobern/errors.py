"""Exception hierarchy shared by every module."""


class OrthoBernError(Exception):
    """Base class for library errors."""


class DomainError(OrthoBernError, ValueError):
    """An abscissa lies outside the interval a basis or function is defined on."""


class BasisIndexError(OrthoBernError, IndexError):
    """A basis index or degree is out of range."""


class CapabilityError(OrthoBernError, ValueError):
    """A request exceeds a hard size guard such as the degree cap."""


class ConfigError(OrthoBernError, ValueError):
    """Inconsistent parameters or run configuration."""


class EvaluationError(OrthoBernError, ArithmeticError):
    """An integrand returned a non-finite value.

    ``abscissa`` holds the first offending sample point (a float, or an
    ``(x, y)`` pair for surface integrands).
    """

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class SingularityError(OrthoBernError, ZeroDivisionError):
    """A triangular solve met a zero pivot."""

"""Exception hierarchy shared by every qtcorr module."""


class QtcorrError(Exception):
    """Base class for all errors raised by qtcorr."""


class DomainError(QtcorrError, ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class SingularParameterError(DomainError, ZeroDivisionError):
    """A formula denominator vanishes at the requested parameters."""


class DegenerateSpecializationError(DomainError):
    """A rational (q, t) specialization collapses a basis construction."""


class ConvergenceError(QtcorrError, ArithmeticError):
    """A numeric series or product did not converge within its budget."""

"""Exception hierarchy shared by every qmock module."""


class QMockError(Exception):
    """Base class for all qmock errors."""


class PoleError(QMockError, ZeroDivisionError):
    """A factor that must be divided by is exactly zero.

    ``factor`` names the offending Pochhammer argument or product entry when
    the caller knows it.
    """

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class NonConvergence(QMockError, ArithmeticError):
    """Summation or product hit ``max_terms`` before the tail was certified."""


class PreconditionError(QMockError, ValueError):
    """Inputs violate a documented domain constraint."""


class AnnulusViolation(PreconditionError):
    """|z| lies outside the convergence annulus of a bilateral series."""


class SingularError(QMockError, ArithmeticError):
    """A quantity is numerically singular (e.g. a guarded 1/z^2 blow-up)."""


class UsageError(QMockError, ValueError):
    """Malformed request: unknown identifier, bad parameter, wrong arity."""


class ConfigError(UsageError):
    """Invalid suite configuration."""


class NearPoleWarning(UserWarning):
    """A divided factor is nonzero but smaller than the near-pole threshold."""

"""Exception types raised by the library."""


class ThermalQubitError(Exception):
    """Base class for all library errors."""


class DomainError(ThermalQubitError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(ThermalQubitError, ArithmeticError):
    """A response function was evaluated on (or numerically at) a pole.

    The offending frequency is kept in ``location``.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class QuadratureError(ThermalQubitError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NonConvergentSumError(ThermalQubitError, ArithmeticError):
    """A Matsubara series does not decay fast enough to be truncated."""

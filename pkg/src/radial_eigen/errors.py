"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so solver code should raise the most
specific class that applies.
"""


class RadialEigenError(Exception):
    """Base class for all package errors."""


class ParameterError(RadialEigenError, ValueError):
    """Invalid or inconsistent problem parameters."""


class DomainError(RadialEigenError, ValueError):
    """Evaluation outside the admissible radial domain."""


class UnsupportedStartupError(RadialEigenError):
    """Origin startup requested in a regime where it is not defined."""


class SolverError(RadialEigenError):
    """A numerical routine failed to produce a result."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class StiffnessError(SolverError):
    """Adaptive step size underflowed; diagnostics carry the final state."""


class NoZeroError(SolverError):
    """No sign change found before the configured radius cap."""


class BracketError(SolverError):
    """An eigenvalue bracket could not be established or was invalid."""


class ConvergenceError(SolverError):
    """An iteration stopped without meeting its tolerance."""


class InvariantViolationError(RadialEigenError):
    """A property the theory guarantees failed on computed data."""

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data


class FitRejectedError(RadialEigenError):
    """Regression preconditions not met (non-monotone data, unbounded limit)."""

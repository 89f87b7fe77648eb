"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class DegenerateStateError(DomainError):
    """All probability amplitudes vanished; no state can be normalized."""


class PatternError(ValueError):
    """A matrix does not have the sparsity pattern a fast path requires."""


class OverflowGuardError(OverflowError):
    """A rate evaluation would overflow double precision."""


class IntegrationError(RuntimeError):
    """The ODE integrator produced a non-finite state."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class QuadratureConvergenceError(RuntimeError):
    """A quadrature did not converge under grid refinement."""

    def __init__(self, message, fine=None, coarse=None):
        super().__init__(message)
        self.fine = fine
        self.coarse = coarse


class ConsistencyError(RuntimeError):
    """A quantity that must be real (or otherwise constrained) is not."""


class ScenarioError(ValueError):
    """A scenario file is missing keys or carries invalid values."""

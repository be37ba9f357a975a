"""Exception hierarchy shared by every submodule."""


class ContLatticeError(Exception):
    """Base class for all library errors."""


class DomainError(ContLatticeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(ContLatticeError, ValueError):
    """Incompatible or unknown configuration (grids, registry names, ...)."""


class DivergenceError(ContLatticeError, ValueError):
    """A transform was requested where it does not converge."""


class ConvergenceError(ContLatticeError, RuntimeError):
    """An iterative routine stopped before reaching its tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate

"""Exception hierarchy for the solver."""


class ChoquardError(Exception):
    """Base class for all package errors."""


class DomainError(ChoquardError, ValueError):
    """A parameter lies outside its admissible range."""


class GridMismatch(ChoquardError, ValueError):
    """Two fields (or a field and an operator) live on different grids."""


class NonPositivePotential(ChoquardError, ValueError):
    pass


class PeriodMismatch(ChoquardError, ValueError):
    pass


class DegeneratePair(ChoquardError):
    """The pair cannot be projected onto the Nehari manifold (u = 0, v = 0 or D <= 0)."""

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)
        self.iteration = iteration


class NoConvergence(ChoquardError):
    """Raised by callers that demand convergence; carries the partial result."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(ChoquardError, ValueError):
    pass

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input violates a documented precondition (bad range, bad matrix, ...)."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge or certify its result.

    When a best feasible value is available it is attached as
    ``best_value`` (an upper bound on the true optimum).
    """

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value


class UsageError(ValueError):
    """Malformed CLI arguments or state specs."""

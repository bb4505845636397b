"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Grid or operator dimensions are inadmissible or do not match."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class LeakageError(ValueError):
    """A state carries too much probability near (or beyond) the grid window."""


class ValidityError(ValueError):
    """A closed form is used outside the regime in which it holds."""


class ConvergenceError(RuntimeError):
    """A numerical quadrature did not reach its requested accuracy."""

    def __init__(self, message, estimate):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate

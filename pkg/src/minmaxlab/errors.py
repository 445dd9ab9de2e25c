"""Exception types shared across the library."""


class DimensionError(ValueError):
    """Shapes of strategies, matrices, or tensors do not line up."""


class CapExceededError(RuntimeError):
    """An enumeration or expansion would exceed its configured size cap."""


class UnsupportedDomainError(ValueError):
    """The requested operation is not defined on this feasible domain."""


class ConvergenceError(RuntimeError):
    """An iterative routine ran out of iterations before reaching tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class BoundViolationError(RuntimeError):
    """A quantity exceeded a bound that an audit promised to enforce."""


class DegenerateGameError(ValueError):
    """Closed-form solver preconditions fail; fall back to enumeration."""


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold for the input."""


class FormatError(ValueError):
    """An input file does not follow the documented wire format."""

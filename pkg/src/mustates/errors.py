"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Bad input: violated precondition, mismatched bases, non-hermitian operand."""


class TruncationError(RuntimeError):
    """A Fock-space construction lost too much norm below the cutoff."""

    def __init__(self, message, captured=None):
        super().__init__(message)
        self.captured = captured


class ConditioningError(RuntimeError):
    """A least-squares family is numerically degenerate."""

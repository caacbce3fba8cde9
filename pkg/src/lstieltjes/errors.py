class LStieltjesError(Exception):
    """Base class for errors raised by this package."""


class DomainError(LStieltjesError, ValueError):
    """An argument lies outside the supported domain."""


class PoleError(LStieltjesError, ZeroDivisionError):
    """Evaluation requested at a pole."""

    def __init__(self, message, residue=None):
        super().__init__(message)
        self.residue = residue


class HypothesisError(LStieltjesError, ValueError):
    """The input violates the hypotheses of a closed-form evaluation."""


class PrecisionInadequate(LStieltjesError):
    """The working precision cannot support the requested computation."""


class ConvergenceError(LStieltjesError):
    """A series did not reach the target tolerance within its term cap."""

"""Exception types shared across the package."""

from __future__ import annotations


class InvalidInputError(ValueError):
    """Malformed or inconsistent input: bad shapes, dependent bases, unknown names."""


class PreconditionError(RuntimeError):
    """A documented operation precondition does not hold for the given arguments."""


class SolverError(RuntimeError):
    """Numerical failure inside an optimization run (NaN/overflow in the objective)."""

    def __init__(self, message: str, iterate=None):
        super().__init__(message)
        self.iterate = iterate

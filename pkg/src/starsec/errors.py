"""Exception types shared across the solver modules."""


class NumericDegeneracyError(RuntimeError):
    """A matrix that must be Hermitian positive (semi)definite is not."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget.

    Diagnostics (residuals, iteration counts) ride along as keyword
    attributes so callers can log them.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

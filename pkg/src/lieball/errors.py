"""Exception hierarchy shared by all modules."""


class LieBallError(Exception):
    """Base class for library errors."""


class ParameterError(LieBallError, ValueError):
    """Invalid model or function parameters (poles, Wallach bound, ranges)."""


class ConvergenceError(LieBallError, ArithmeticError):
    """A series or quadrature failed to reach the requested accuracy."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class BranchError(LieBallError, ArithmeticError):
    """A principal-branch power could not be certified along its path."""


class DomainError(LieBallError, ValueError):
    """A point lies outside the domain where an operation is defined."""

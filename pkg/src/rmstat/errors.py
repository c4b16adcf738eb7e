"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined."""


class ResolutionError(RuntimeError):
    """A quadrature cannot resolve the requested oscillation within its node budget."""


class SingularOperatorError(ArithmeticError):
    """I + K is numerically singular, so the determinant is indistinguishable from zero."""


class HypothesisError(ValueError):
    """A test function does not meet the smoothness hypotheses an asymptotic formula needs."""


class ConvergenceError(RuntimeError):
    """An iterative method or a self-convergence check failed."""

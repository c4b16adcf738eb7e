"""Linear eigenvalue statistics of Hermitian and positive Hermitian ensembles.

Exact characteristic functions from Fredholm determinants of sine- and
Bessel-kernel operators, their Gaussian asymptotics, and Monte Carlo checks.
"""

from .errors import ConvergenceError, DomainError, HypothesisError, ResolutionError, SingularOperatorError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "HypothesisError",
    "ResolutionError",
    "SingularOperatorError",
]

"""Special functions and Gauss-Legendre rules.

Bessel functions and log-Gamma are thin, validated wrappers over
``scipy.special``. The orthonormal Hermite and Laguerre functions are
evaluated with normalized three-term recurrences so that no raw
polynomial (which overflows for large degree) is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

# J_{nu-1} and J_{nu+1} are needed for every supported nu in [-1/2, 6].
NU_MIN = -1.5
NU_MAX = 7.0
MAX_INDEX = 500


@dataclass(frozen=True)
class Quadrature:
    """Nodes and positive weights for integrating over ``interval``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        a, b = self.interval
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights differ in length")
        if self.nodes.size:
            if np.any(np.diff(self.nodes) <= 0):
                raise ValueError("nodes must be strictly increasing")
            if self.nodes[0] <= a or self.nodes[-1] >= b:
                raise ValueError("nodes must lie inside the open interval")
            if np.any(self.weights <= 0):
                raise ValueError("weights must be positive")
            total = self.weights.sum()
            if abs(total - (b - a)) > 1e-12 * (b - a):
                raise ValueError(f"weights sum to {total}, expected {b - a}")

    def __len__(self):
        return self.nodes.size

    def integrate(self, values):
        """Apply the rule to sampled values (last axis runs over nodes)."""
        return np.asarray(values) @ self.weights


def gauss_legendre(n: int, a: float, b: float) -> Quadrature:
    """n-point Gauss-Legendre rule on (a, b)."""
    if n < 1:
        raise DomainError("need at least one node")
    if not a < b:
        raise DomainError(f"invalid interval ({a}, {b})")
    t, w = special.roots_legendre(n)
    half = 0.5 * (b - a)
    nodes = a + half * (t + 1.0)
    weights = half * w
    # renormalize so sum(weights) == b - a to rounding
    weights *= (b - a) / weights.sum()
    return Quadrature(nodes, weights, (float(a), float(b)))


def composite_gauss_legendre(breaks, per_panel: int) -> Quadrature:
    """Gauss-Legendre rule with ``per_panel`` nodes on each [breaks[i], breaks[i+1]]."""
    breaks = np.asarray(breaks, dtype=float)
    if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
        raise DomainError("breakpoints must be strictly increasing")
    t, w = special.roots_legendre(per_panel)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (t + 1.0)).ravel()
    weights = (half * w).ravel()
    a, b = float(breaks[0]), float(breaks[-1])
    weights *= (b - a) / weights.sum()
    return Quadrature(nodes, weights, (a, b))


def panel_breaks(a: float, b: float, width: float, min_panels: int = 1) -> np.ndarray:
    """Equally spaced panel boundaries on [a, b] with panels no wider than ``width``."""
    count = max(min_panels, int(np.ceil((b - a) / width)))
    return np.linspace(a, b, count + 1)


def _check_nu(nu):
    if not NU_MIN <= nu <= NU_MAX:
        raise DomainError(f"Bessel order {nu} outside [{NU_MIN}, {NU_MAX}]")


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x) for x >= 0."""
    _check_nu(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j needs x >= 0")
    return _scalar_or_array(special.jv(nu, x))


def bessel_j_prime(nu: float, x):
    """Derivative J_nu'(x) = (J_{nu-1}(x) - J_{nu+1}(x)) / 2."""
    return _scalar_or_array(0.5 * (np.asarray(bessel_j(nu - 1, x)) - bessel_j(nu + 1, x)))


def log_gamma(z):
    """log Gamma(z) for real z > 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("log_gamma needs z > 0")
    return _scalar_or_array(special.gammaln(z))


def _check_index(i):
    if i < 0 or i > MAX_INDEX:
        raise DomainError(f"index {i} outside the stable range [0, {MAX_INDEX}]")


def hermite_fns(n: int, x) -> np.ndarray:
    """Rows 0..n-1 of the orthonormal Hermite functions at x.

    phi_i is the orthonormalization of x^i exp(-x^2/2) on the real line, so
    that sum_i phi_i(x)^2 carries the weight exp(-x^2).
    """
    if n < 1:
        raise DomainError("need n >= 1")
    _check_index(n - 1)
    x = np.asarray(x, dtype=float)
    out = np.empty((n,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for i in range(1, n - 1):
        out[i + 1] = np.sqrt(2.0 / (i + 1)) * x * out[i] - np.sqrt(i / (i + 1)) * out[i - 1]
    return out


def hermite_fn(i: int, x):
    """The i-th orthonormal Hermite function."""
    _check_index(i)
    return _scalar_or_array(hermite_fns(i + 1, x)[i])


def laguerre_fns(n: int, nu: float, x) -> np.ndarray:
    """Rows 0..n-1 of the orthonormal Laguerre functions with parameter nu.

    phi_i(x) = sqrt(i! / Gamma(i+nu+1)) x^{nu/2} e^{-x/2} L_i^{(nu)}(x).
    """
    if n < 1:
        raise DomainError("need n >= 1")
    _check_index(n - 1)
    if nu <= -1:
        raise DomainError("laguerre functions need nu > -1")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("laguerre functions need x > 0")
    out = np.empty((n,) + x.shape)
    out[0] = np.exp(0.5 * nu * np.log(x) - 0.5 * x - 0.5 * special.gammaln(nu + 1.0))
    if n > 1:
        out[1] = (1.0 + nu - x) * out[0] / np.sqrt(1.0 + nu)
    for i in range(1, n - 1):
        out[i + 1] = ((2 * i + 1 + nu - x) * out[i] - np.sqrt(i * (i + nu)) * out[i - 1]) / np.sqrt(
            (i + 1) * (i + 1 + nu)
        )
    return out


def laguerre_fn(i: int, nu: float, x):
    """The i-th orthonormal Laguerre function with parameter nu."""
    _check_index(i)
    return _scalar_or_array(laguerre_fns(i + 1, nu, x)[i])

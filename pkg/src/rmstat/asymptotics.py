"""Closed-form large-alpha predictions for means, variances and characteristic functions.

Sine regime (kernel sin(x-y)/(pi(x-y)) on (-alpha, alpha)):
    mean = tr A_alpha(f) = (alpha/pi) int_R f,  var = 2 int_0^inf x f^(x) f^(-x) dx
Bessel regime (order nu, hard edge):
    mean = (alpha/pi) int_0^inf f - (nu/2) f(0),  var = (1/pi^2) int_0^inf x C(f)^2 dx
and log phi(k) ~ ik mean - k^2 var / 2 in both.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, special

from .errors import DomainError, HypothesisError
from .symbols import TestFunction, make_symbol, power_profile
from .transforms import DEFAULT, TransformConfig, cosine_pair_integral, cosine_transform, fourier_pair_integral, mellin_variance_integral


@dataclass(frozen=True)
class GaussianPrediction:
    mean: float
    variance: float
    regime: str
    alpha: float
    nu: Optional[float] = None
    notes: dict = field(default_factory=dict, compare=False)

    def log_cf(self, k: float) -> complex:
        return 1j * k * self.mean - 0.5 * k * k * self.variance

    def cf(self, k: float) -> complex:
        return cmath.exp(self.log_cf(k))


# ---------------------------------------------------------------- sine regime


@lru_cache(maxsize=64)
def sine_variance(f: TestFunction) -> float:
    """2 int_0^inf x f^(x) f^(-x) dx via the whole-line Fourier route."""
    return fourier_pair_integral(f)


def sine_operator_mean(f: TestFunction, alpha: float, cfg: TransformConfig = DEFAULT) -> float:
    """tr A_alpha(f): constant diagonal (1/pi) C(f)(0) over an interval of length 2 alpha."""
    return 2.0 * alpha / math.pi * cosine_transform(f, 0.0, cfg)


def literal_sine_mean(f: TestFunction, alpha: float) -> float:
    """(alpha / 2pi) int_R f, the literal large-alpha mean with half the operator prefactor."""
    return alpha / (2.0 * math.pi) * f.integral_fullline


def sine_prediction(f: TestFunction, alpha: float, cfg: TransformConfig = DEFAULT) -> GaussianPrediction:
    mean = sine_operator_mean(f, alpha, cfg)
    literal = literal_sine_mean(f, alpha)
    return GaussianPrediction(
        mean,
        sine_variance(f),
        "sine",
        alpha,
        notes={"literal_mean": literal, "prefactor_mismatch": not math.isclose(mean, literal, rel_tol=1e-9, abs_tol=1e-12)},
    )


# ---------------------------------------------------------------- Bessel regime


def bessel_mean(f: TestFunction, alpha: float, nu: float) -> float:
    return alpha / math.pi * f.integral_halfline - 0.5 * nu * f.value_at_zero


@lru_cache(maxsize=64)
def bessel_variance_cosine(f: TestFunction) -> float:
    return cosine_pair_integral(f, f) / math.pi**2


@lru_cache(maxsize=64)
def bessel_variance_mellin(f: TestFunction) -> float:
    return mellin_variance_integral(f) / math.pi**2


def required_smoothness(nu: float) -> int:
    return math.ceil(nu) + 2


def bessel_cf_prediction(f: TestFunction, alpha: float, nu: float) -> GaussianPrediction:
    need = required_smoothness(nu)
    if f.smoothness < need:
        raise HypothesisError(
            f"{f.id} declares {f.smoothness} L1 derivatives; the Gaussian limit at nu={nu} needs {need}"
        )
    return GaussianPrediction(bessel_mean(f, alpha, nu), bessel_variance_cosine(f), "bessel", alpha, nu)


def half_line_log_prediction(f: TestFunction, alpha: float, k: float) -> complex:
    """The nu = -1/2 determinant asymptotics written term by term:
    (alpha/pi) int_0^inf ikf + (ik/4) f(0) - (k^2 / 2pi^2) int_0^inf x |C(f)|^2.
    """
    return (
        alpha / math.pi * 1j * k * f.integral_halfline
        + 0.25j * k * f.value_at_zero
        - 0.5 * k * k * cosine_pair_integral(f, f) / math.pi**2
    )


# ---------------------------------------------------------------- Szego and trace powers


def szego_G(f: TestFunction, k: float) -> complex:
    """exp((1/2pi) int_R log(1 + sigma)), with log(1 + sigma) = ikf on the principal branch."""
    if abs(k) * f.sup_norm >= math.pi:
        raise DomainError(f"|k| sup|f| = {abs(k) * f.sup_norm:g} >= pi leaves the principal branch")
    return cmath.exp(1j * k * f.integral_fullline / (2.0 * math.pi))


def trace_power_correction(f: TestFunction, k: float, n: int, cfg: TransformConfig = DEFAULT) -> complex:
    """-(1/pi^2) sum_{j=1}^{n-1} (1/j) int_0^inf x C(sigma^j) C(sigma^(n-j)) dx."""
    if n < 2:
        raise DomainError("the trace-power correction needs n >= 2")
    if k == 0:
        return 0j
    sigma = make_symbol(f, k)
    total = 0j
    for j in range(1, n):
        total += cosine_pair_integral(power_profile(sigma, j), power_profile(sigma, n - j), cfg) / j
    return -total / math.pi**2


# the name used by the operation contract
thm12_correction = trace_power_correction


# ---------------------------------------------------------------- combinatorial utilities


def t_weight(p: complex, q: complex) -> complex:
    """t(p, q) = 2 G(p) G(q) cos(pi p/2) cos(pi q/2) / (G(p+q) cos(pi (p+q)/2))."""
    p, q = complex(p), complex(q)
    if not (0 < p.real < 1 and 0 < q.real < 1 and (p + q).real < 1):
        raise DomainError("t(p, q) needs 0 < Re p, Re q < 1 and Re(p + q) < 1")
    num = 2.0 * special.gamma(p) * special.gamma(q) * cmath.cos(math.pi * p / 2) * cmath.cos(math.pi * q / 2)
    return complex(num / (special.gamma(p + q) * cmath.cos(math.pi * (p + q) / 2)))


def t_weight_quadrature(p: float, q: float) -> float:
    """int_R |x|^(p-1) |x+1|^(q-1) dx by QUADPACK's algebraic-weight rules.

    The line is cut at -2, -1, 0, 1; the two tails are mapped to (0, 1] and
    (0, 1/2] by x = +-1/s, where the integrand becomes s^(-p-q) times a
    smooth factor.
    """
    p, q = float(p), float(q)
    if not (0 < p < 1 and 0 < q < 1 and p + q < 1):
        raise DomainError("the integral converges only for 0 < p, q and p + q < 1")
    opts = dict(epsabs=1e-13, epsrel=1e-12, limit=200)
    one = lambda x: 1.0
    parts = [
        # (-1, 0): (x+1)^(q-1) (-x)^(p-1)
        integrate.quad(one, -1.0, 0.0, weight="alg", wvar=(q - 1, p - 1), **opts),
        # (0, 1): x^(p-1) times a smooth factor
        integrate.quad(lambda x: (x + 1.0) ** (q - 1), 0.0, 1.0, weight="alg", wvar=(p - 1, 0.0), **opts),
        # (-2, -1): (-1-x)^(q-1) times a smooth factor
        integrate.quad(lambda x: (-x) ** (p - 1), -2.0, -1.0, weight="alg", wvar=(0.0, q - 1), **opts),
        # (1, inf) with x = 1/s
        integrate.quad(lambda s: (1.0 + s) ** (q - 1), 0.0, 1.0, weight="alg", wvar=(-p - q, 0.0), **opts),
        # (-inf, -2) with x = -1/s
        integrate.quad(lambda s: (1.0 - s) ** (q - 1), 0.0, 0.5, weight="alg", wvar=(-p - q, 0.0), **opts),
    ]
    return float(sum(v for v, _ in parts))


def kac_identity_check(a: Sequence[float]) -> tuple[float, float]:
    """Both sides of Kac's max identity by enumerating all permutations.

    lhs = sum_pi max(0, s_1, ..., s_n), rhs = sum_pi sum_k a_pi1 theta(s_k),
    s_k the partial sums of the permuted vector, theta(x) = 1 for x > 0.
    Sums are accumulated in exact rational arithmetic (floats convert to
    fractions exactly), so the two sides agree exactly when the identity holds.
    """
    a = [Fraction(float(v)) for v in a]
    if len(a) > 7:
        raise DomainError("exhaustive enumeration is limited to n <= 7")
    if not a:
        return 0.0, 0.0
    lhs = rhs = Fraction(0)
    for perm in itertools.permutations(a):
        s = list(itertools.accumulate(perm))
        lhs += max(Fraction(0), max(s))
        rhs += perm[0] * sum(1 for v in s if v > 0)
    return float(lhs), float(rhs)

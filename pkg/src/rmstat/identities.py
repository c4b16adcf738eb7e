"""Residuals of the Wiener-Hopf/Hankel product identities at finite truncation.

With phi = 1 + s1, psi = 1 + s2 (W(1) = I, H(1) = 0) the identities reduce to
statements about kernels on (0, inf):

    W(s1)H(s2) + H(s1)W(s2) - H(s1 s2)           = 0
    W(s1)W(s2) + H(s1)H(s2) - W(s1 s2)           = 0
    W(s)W(g) - W(s g)      = 0   if g^ vanishes on (-inf, 0)
    W(g)W(s) - W(s g)      = 0   if g^ vanishes on (0, inf)
    (W(phi)+H(phi))(W(1/phi)+H(1/phi)) - I = 0

Truncating to (0, alpha) drops the part of each product integral over
z > alpha. Near the corner x, y ~ alpha that part is O(1) for every alpha,
so the residual is measured on an inner window (0, w alpha)^2, where the
dropped piece decays with the kernels. Products are computed as continuous
integrals in z with panel breaks at z = x and z = y, where kernels built
from algebraically decaying symbols have corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from .specfun import composite_gauss_legendre
from .symbols import Profile, TestFunction, make_symbol, symbol_profile
from .operators import difference_kernel, sum_kernel
from .transforms import DEFAULT, TransformConfig, fourier_half_integral


def _compose(k1, k2, x: float, y: float, alpha: float, width: float = 0.5, per: int = 16) -> complex:
    """int_0^alpha k1(x, z) k2(z, y) dz with breaks at z = x, y."""
    pts = sorted({0.0, alpha, min(max(x, 0.0), alpha), min(max(y, 0.0), alpha)})
    breaks = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 0:
            continue
        m = max(1, int(math.ceil((b - a) / width)))
        breaks.extend(np.linspace(a, b, m + 1)[1:])
    rule = composite_gauss_legendre(np.array(breaks), per)
    z = rule.nodes
    return complex(rule.integrate(k1(x, z) * k2(z, y)))


def _one_sided_kernel(k: float, side: str):
    """Kernel of W(g) for g = k/(1-it) (side='+') or k/(1+it) (side='-').

    With g^(u) = (1/2pi) int g(t) e^{-itu} dt these are k e^{-u} on u > 0
    and k e^{u} on u < 0 (close the contour away from the pole at t = -+i).
    """
    if side == "+":
        return lambda x, y: k * np.where(np.subtract(x, y) > 0, np.exp(-np.abs(np.subtract(x, y))), 0.0)
    return lambda x, y: k * np.where(np.subtract(x, y) < 0, np.exp(-np.abs(np.subtract(x, y))), 0.0)


def _product_fourier_kernel(sigma_profile: Profile, k: float, side: str):
    """Kernel of W(sigma g), sigma even, by QUADPACK Fourier integrals.

    With g = k/(1 -+ it) = k (1 +- it)/(1 + t^2):
    (1/2pi) int sigma(t) g(t) e^{-itu} dt
        = (k/pi) int_0^inf sigma(t) [cos(tu) +- t sin(tu)] / (1 + t^2) dt
    """
    sgn = -1.0 if side == "+" else 1.0
    p = sigma_profile

    def one(u: float) -> complex:
        w = abs(u)
        s_sign = 1.0 if u >= 0 else -1.0
        out = 0j
        for part, conv in ((np.real, 1.0), (np.imag, 1j)):
            fc = lambda t: float(part(p(np.array(t)))) / (1.0 + t * t)
            fs = lambda t: float(part(p(np.array(t)))) * t / (1.0 + t * t)
            c = fourier_half_integral(fc, w, "cos", None)
            s = fourier_half_integral(fs, w, "sin", None)
            out += conv * (c - sgn * s_sign * s)
        return k / math.pi * out

    cache: dict[float, complex] = {}

    def kern(x, y):
        u = float(np.subtract(x, y))
        if u not in cache:
            cache[u] = one(u)
        return cache[u]

    return kern


@dataclass(frozen=True)
class IdentityResiduals:
    alpha: float
    window: float
    hankel_product: float
    wiener_product: float
    one_sided_plus: float
    one_sided_minus: float
    inverse_product: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _sample_points(alpha: float, window: float, m: int) -> np.ndarray:
    return np.linspace(0.0, window * alpha, m + 1)[1:] - 0.5 * window * alpha / m


def identity_residuals(
    f1: TestFunction,
    f2: TestFunction,
    k: float,
    alpha: float,
    window: float = 0.5,
    m: int = 10,
    cfg: TransformConfig = DEFAULT,
) -> IdentityResiduals:
    """Max-norm residuals of the product identities on (0, window*alpha)^2."""
    s1, s2 = make_symbol(f1, k), make_symbol(f2, k)
    p1, p2 = symbol_profile(s1), symbol_profile(s2)
    zmax = 2.0 * alpha
    W1, H1 = difference_kernel(p1, zmax, cfg), sum_kernel(p1, zmax, cfg)
    W2, H2 = difference_kernel(p2, zmax, cfg), sum_kernel(p2, zmax, cfg)
    p12 = p1 * p2
    W12, H12 = difference_kernel(p12, zmax, cfg), sum_kernel(p12, zmax, cfg)
    # inverse symbol of phi = 1 + s1 is 1 + conj(s1)
    q1 = p1.conj()
    Wq, Hq = difference_kernel(q1, zmax, cfg), sum_kernel(q1, zmax, cfg)
    gp, gm = _one_sided_kernel(k, "+"), _one_sided_kernel(k, "-")
    Wsg_p, Wsg_m = _product_fourier_kernel(p2, k, "+"), _product_fourier_kernel(p2, k, "-")

    A = lambda x, y: W1(x, y) + H1(x, y)
    Ainv = lambda x, y: Wq(x, y) + Hq(x, y)

    pts = _sample_points(alpha, window, m)
    r = np.zeros((5, pts.size, pts.size))
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            r[0, i, j] = abs(_compose(W1, H2, x, y, alpha) + _compose(H1, W2, x, y, alpha) - H12(x, y))
            r[1, i, j] = abs(_compose(W1, W2, x, y, alpha) + _compose(H1, H2, x, y, alpha) - W12(x, y))
            r[2, i, j] = abs(_compose(W2, gp, x, y, alpha) - Wsg_p(x, y))
            r[3, i, j] = abs(_compose(gm, W2, x, y, alpha) - Wsg_m(x, y))
            r[4, i, j] = abs(A(x, y) + Ainv(x, y) + _compose(A, Ainv, x, y, alpha))
    mx = r.reshape(5, -1).max(axis=1)
    return IdentityResiduals(alpha, window, *map(float, mx))

"""Cosine, Fourier and Mellin transforms of even test functions and symbols.

Conventions
-----------
C(f)(x) = int_0^inf f(y) cos(xy) dy
f^(xi)  = (1/2pi) int_R f(x) exp(-i xi x) dx
M(f)(s) = int_0^inf f(x) x^(s-1) dx, evaluated on the line s = 2iy

The cosine route integrates on composite Gauss-Legendre panels narrow
enough to give every period of cos(xy) at least ``oscillation_safety``
nodes. The Fourier route is deliberately separate: it calls QUADPACK's
Fourier-weighted rules on each half line and never uses evenness, so the
two can cross-check each other.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev
from scipy import integrate

from .errors import ConvergenceError, ResolutionError
from .specfun import Quadrature, composite_gauss_legendre, panel_breaks
from .symbols import Profile, TestFunction, as_profile

_CHUNK = 4_000_000  # max entries of a cos(x y) block held at once


@dataclass(frozen=True)
class TransformConfig:
    """Quadrature budget for oscillatory integrals on [0, truncation_radius].

    ``panel_count`` is a lower bound; more panels are added to resolve the
    oscillation. ``truncation_radius=None`` means "where the majorant of the
    integrand drops below ``tol``".
    """

    panel_count: int = 1
    points_per_panel: int = 16
    truncation_radius: Optional[float] = None
    oscillation_safety: float = 10.0
    tol: float = 1e-13
    max_nodes: int = 400_000
    max_panel_width: float = 0.5

    def __post_init__(self):
        if self.panel_count < 1:
            raise ValueError("panel_count must be positive")
        if self.points_per_panel < 4:
            raise ValueError("points_per_panel must be >= 4")
        if self.truncation_radius is not None and self.truncation_radius <= 0:
            raise ValueError("truncation_radius must be positive")
        if self.oscillation_safety < 4:
            raise ValueError("oscillation_safety must be >= 4 nodes per period")
        if self.tol <= 0 or self.max_nodes < 1 or self.max_panel_width <= 0:
            raise ValueError("tol, max_nodes and max_panel_width must be positive")


DEFAULT = TransformConfig()


def oscillatory_rule(a: float, b: float, omega: float, cfg: TransformConfig = DEFAULT) -> Quadrature:
    """Composite Gauss-Legendre rule on (a, b) for integrands oscillating like cos(omega t)."""
    width = cfg.max_panel_width
    if omega > 0:
        width = min(width, 2 * math.pi / omega * cfg.points_per_panel / cfg.oscillation_safety)
    breaks = panel_breaks(a, b, width, cfg.panel_count)
    n_nodes = (breaks.size - 1) * cfg.points_per_panel
    if n_nodes > cfg.max_nodes:
        raise ResolutionError(
            f"resolving frequency {omega:g} on ({a:g}, {b:g}) needs {n_nodes} nodes, budget {cfg.max_nodes}"
        )
    return composite_gauss_legendre(breaks, cfg.points_per_panel)


def _cos_apply(x: np.ndarray, nodes: np.ndarray, wvals: np.ndarray) -> np.ndarray:
    """sum_j wvals_j cos(x_i nodes_j), blocked to bound memory."""
    out = np.empty(x.shape, dtype=np.result_type(wvals, float))
    flat = x.ravel()
    res = out.ravel()
    step = max(1, _CHUNK // max(1, nodes.size))
    for i in range(0, flat.size, step):
        res[i : i + step] = np.cos(np.outer(flat[i : i + step], nodes)) @ wvals
    return res.reshape(x.shape)


def _rest_radius(p: Profile, cfg: TransformConfig) -> float:
    if cfg.truncation_radius is not None:
        return cfg.truncation_radius
    return p.radius(cfg.tol)


def _lead_cosine(p: Profile, x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape, dtype=complex if not p.is_real else float)
    for c, g in p.leads:
        if g.cosine_transform_closed_form is None:
            raise ValueError(f"leading term {g.id} has no closed-form cosine transform")
        out = out + c * g.cosine_transform_closed_form(x)
    return out


def _rest_cosine(p: Profile, x: np.ndarray, cfg: TransformConfig) -> np.ndarray:
    R = _rest_radius(p, cfg)
    if R == 0.0:
        return np.zeros(x.shape)
    omega = float(np.max(np.abs(x))) if x.size else 0.0
    rule = oscillatory_rule(0.0, R, omega, cfg)
    wvals = rule.weights * p.rest(rule.nodes)
    if p.is_real:
        wvals = np.real(wvals)
    return _cos_apply(x, rule.nodes, wvals)


def _finish(out, scalar: bool, real: bool):
    if real:
        out = np.real(out)
    if scalar:
        return out.item()
    return out


def cosine_transform(f, x, cfg: TransformConfig = DEFAULT):
    """C(f)(x) for a TestFunction, Symbol or Profile; vectorized in x."""
    p = as_profile(f, cfg.truncation_radius)
    xa = np.abs(np.asarray(x, dtype=float))
    out = _lead_cosine(p, xa) + _rest_cosine(p, xa, cfg)
    return _finish(out, np.ndim(x) == 0, p.is_real)


class CosineTable:
    """Piecewise Chebyshev interpolant of C(p) on [0, zmax].

    Closed-form leading terms are evaluated exactly; only the numerically
    integrated rest is tabulated. Pieces are bisected until the trailing
    Chebyshev coefficients fall below the absolute ``tol``.
    """

    def __init__(self, f, zmax: float, cfg: TransformConfig = DEFAULT, degree: int = 24, tol: float = 1e-13):
        self.profile = p = as_profile(f, cfg.truncation_radius)
        self.zmax = float(zmax)
        self.cfg = cfg
        self.degree = degree
        R = _rest_radius(p, cfg)
        self._pieces: list[tuple[float, float, np.ndarray]] = []
        if R == 0.0:
            self._breaks = np.array([0.0, max(self.zmax, 1.0)])
            self._coefs = [np.zeros(1)]
            return
        edges = np.linspace(0.0, max(self.zmax, 1e-12), int(math.ceil(max(self.zmax, 1e-12) / 2.0)) + 1)
        stack = [(edges[i], edges[i + 1], 0) for i in range(edges.size - 1)][::-1]
        pieces = []
        while stack:
            a, b, depth = stack.pop()
            c = self._fit(a, b)
            tail = np.max(np.abs(c[-3:]))
            if tail > tol and depth < 12:
                m = 0.5 * (a + b)
                stack.append((m, b, depth + 1))
                stack.append((a, m, depth + 1))
            else:
                pieces.append((a, b, c))
        pieces.sort(key=lambda t: t[0])
        self._breaks = np.array([pc[0] for pc in pieces] + [pieces[-1][1]])
        self._coefs = [pc[2] for pc in pieces]

    def _fit(self, a: float, b: float) -> np.ndarray:
        n = self.degree + 1
        t = np.cos(np.pi * (np.arange(n) + 0.5) / n)  # first-kind points on [-1, 1]
        z = a + 0.5 * (b - a) * (t + 1.0)
        vals = _rest_cosine(self.profile, z, self.cfg)
        return chebyshev.chebfit(t, vals, self.degree)

    @property
    def piece_count(self) -> int:
        return len(self._coefs)

    def __call__(self, z):
        za = np.abs(np.asarray(z, dtype=float))
        if np.any(za > self._breaks[-1] * (1 + 1e-12)):
            raise ValueError(f"argument beyond tabulated range {self._breaks[-1]:g}")
        idx = np.clip(np.searchsorted(self._breaks, za, side="right") - 1, 0, len(self._coefs) - 1)
        rest = np.zeros(za.shape, dtype=complex)
        for i in np.unique(idx):
            mask = idx == i
            a, b = self._breaks[i], self._breaks[i + 1]
            t = 2.0 * (za[mask] - a) / (b - a) - 1.0
            rest[mask] = chebyshev.chebval(t, self._coefs[i])
        out = _lead_cosine(self.profile, za) + rest
        return _finish(out, np.ndim(z) == 0, self.profile.is_real)


def fourier_half_integral(fn, xi: float, kind: str, upper: Optional[float]) -> float:
    """int_0^upper fn(x) w(xi x) dx with w = cos or sin, via QUADPACK."""
    with warnings.catch_warnings():
        # QUADPACK warnings are replaced by the explicit error-estimate check below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        # QAWF's cycle extrapolation occasionally stalls at the tightest
        # tolerance, sometimes returning the float maximum with a small error
        # estimate; both are retried at a looser tolerance
        for eps in (1e-14, 1e-13, 1e-12):
            val, err = quad_fourier_half(fn, xi, kind, upper, eps)
            ok = np.isfinite(val) and abs(val) < 1e100 and err <= 1e-9
            if ok:
                break
    if not ok:
        raise ResolutionError(f"Fourier integral at xi={xi:g} not resolved (error estimate {err:.2e})")
    return val


def quad_fourier_half(fn, xi, kind, upper, eps):
    """QUADPACK int_0^upper fn(x) w(xi x) dx, w = cos or sin; upper=None means infinity."""
    if xi == 0.0:
        if kind == "sin":
            return 0.0, 0.0
        return integrate.quad(fn, 0.0, np.inf if upper is None else upper, epsabs=eps, epsrel=1e-12, limit=500)[:2]
    if upper is None:
        return integrate.quad(fn, 0.0, np.inf, weight=kind, wvar=xi, epsabs=eps, limlst=200, limit=500)[:2]
    return integrate.quad(fn, 0.0, upper, weight=kind, wvar=xi, epsabs=eps, epsrel=1e-12, limit=500)[:2]


def fourier_transform(f: TestFunction, xi: float) -> complex:
    """f^(xi) = (1/2pi) int_R f(x) exp(-i xi x) dx by half-line QUADPACK rules.

    Both half lines are integrated separately from the raw f (no symmetry
    is assumed).
    """
    xi = float(xi)
    upper = None
    try:
        r = f.radius(1e-18)
        if r < 1e3:
            upper = max(r, 1e-6)
    except ValueError:
        pass
    sgn = 1.0 if xi >= 0 else -1.0
    w = abs(xi)
    right = lambda x: float(f(x))
    left = lambda x: float(f(-x))
    # int_0^inf f(x) e^{-i xi x} + int_0^inf f(-x) e^{i xi x}
    re = fourier_half_integral(right, w, "cos", upper) + fourier_half_integral(left, w, "cos", upper)
    im = -sgn * fourier_half_integral(right, w, "sin", upper) + sgn * fourier_half_integral(left, w, "sin", upper)
    return complex(re, im) / (2 * math.pi)


def _doubling_integral(integrand, start: float, tol: float, panel: float = 0.5, per_panel: int = 16, cap: float = 4096.0):
    """int_0^inf integrand(x) dx, doubling the upper limit until a slab is below tol."""
    total = 0.0
    lo, hi = 0.0, start
    quiet = 0
    while True:
        rule = composite_gauss_legendre(panel_breaks(lo, hi, panel), per_panel)
        slab = rule.integrate(integrand(rule.nodes))
        total = total + slab
        if lo > 0 and abs(slab) < tol:
            quiet += 1
            if quiet == 2:
                return total
        else:
            quiet = 0
        if hi >= cap:
            raise ConvergenceError(f"integral did not settle before x={cap:g} (last slab {abs(slab):.2e})")
        lo, hi = hi, 2 * hi


def cosine_pair_integral(f, g, cfg: TransformConfig = DEFAULT, tol: float = 1e-13):
    """int_0^inf x C(f)(x) C(g)(x) dx."""
    p = as_profile(f, cfg.truncation_radius)
    q = as_profile(g, cfg.truncation_radius)
    if _is_null(p) or _is_null(q):
        return 0.0
    integrand = lambda x: x * cosine_transform(p, x, cfg) * cosine_transform(q, x, cfg)
    val = _doubling_integral(integrand, 8.0, tol)
    if p.is_real and q.is_real:
        return float(np.real(val))
    return complex(val)


def _is_null(p: Profile) -> bool:
    if any(c != 0 for c, _ in p.leads):
        return False
    try:
        return p.radius(0.0) == 0.0
    except ValueError:
        return False


def fourier_pair_integral(f: TestFunction, tol: float = 1e-13) -> float:
    """2 int_0^inf x f^(x) f^(-x) dx, the whole-line variance form."""
    if f.sup_norm == 0:
        return 0.0

    def integrand(xs):
        return np.array([x * fourier_transform(f, x) * fourier_transform(f, -x) for x in xs])

    return float(np.real(2.0 * _doubling_integral(integrand, 8.0, tol, panel=1.0)))


def _mellin_limits(f: TestFunction) -> tuple[float, float]:
    f0 = f.value_at_zero
    lo = -20.0
    while abs(float(f(math.exp(lo))) - f0) > 1e-16:
        lo -= 5.0
        if lo < -60.0:
            if abs(float(f(math.exp(lo))) - f0) > 1e-10:
                raise ConvergenceError(f"{f.id}: f(x) - f(0) does not vanish at 0; Mellin subtraction fails")
            break
    try:
        R = f.radius(1e-17)
    except ValueError:
        raise ConvergenceError(f"{f.id}: f does not decay; Mellin integral diverges") from None
    hi = math.log(max(R, 1.0)) + 0.5
    return lo, hi


def mellin_line(f: TestFunction, y, cfg: TransformConfig = DEFAULT):
    """M(f)(2iy) = int_0^inf f(x) x^(2iy-1) dx for y != 0.

    Regularized as int_0^inf [f(x) - f(0) 1{x<1}] x^(s-1) dx + f(0)/s and
    computed in the variable x = e^t.
    """
    ya = np.asarray(y, dtype=float)
    if np.any(ya == 0):
        raise ValueError("M(f)(2iy) has a pole at y = 0 when f(0) != 0")
    lo, hi = _mellin_limits(f)
    omega = 2 * float(np.max(np.abs(ya)))
    # the subtracted indicator jumps at t = 0, so panels must break there
    val = f.value_at_zero / (2j * ya)
    for a, b, shift in ((lo, 0.0, f.value_at_zero), (0.0, hi, 0.0)):
        rule = oscillatory_rule(a, b, omega, cfg)
        t = rule.nodes
        g = np.asarray(f(np.exp(t)), dtype=float) - shift
        val = val + _blocked_phase(ya, t, rule.weights * g)
    return val.item() if np.ndim(y) == 0 else val


def _blocked_phase(y: np.ndarray, t: np.ndarray, wvals: np.ndarray) -> np.ndarray:
    """sum_j wvals_j exp(2i y t_j), blocked to bound memory."""
    flat = np.atleast_1d(y).ravel()
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, t.size))
    for i in range(0, flat.size, step):
        out[i : i + step] = np.exp(2j * np.outer(flat[i : i + step], t)) @ wvals
    return out.reshape(np.shape(y))


def mellin_variance_integral(f: TestFunction, tol: float = 1e-13, cfg: TransformConfig = DEFAULT) -> float:
    """int_R |M(f)(2iy)|^2 y tanh(pi y) dy (even in y, so twice the half line)."""
    if f.sup_norm == 0:
        return 0.0

    def integrand(ys):
        m = mellin_line(f, ys, cfg)
        return np.abs(m) ** 2 * ys * np.tanh(np.pi * ys)

    return float(2.0 * _doubling_integral(integrand, 2.0, tol, panel=0.25))

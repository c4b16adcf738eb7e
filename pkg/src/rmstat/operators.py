"""Kernels and Nystrom discretizations of the operators behind the statistics.

Operators store the raw kernel K(x_i, x_j) on a quadrature grid together
with the grid's weights; the symmetrized form w^(1/2) K w^(1/2) used for
determinants is built in :mod:`rmstat.fredholm`.

Operator families (sigma an even symbol, C the cosine transform):

* A_alpha(sigma) on (-alpha, alpha), kernel (1/pi) C(sigma)(x - y)
* W_alpha(sigma) on (0, alpha),      kernel (1/pi) C(sigma)(x - y)
* H_alpha(sigma) on (0, alpha),      kernel (1/pi) C(sigma)(x + y)
* B_alpha(sigma) on (0, 1), kernel
  alpha^2 sqrt(xy) int_0^inf u sigma(u) J_nu(alpha u x) J_nu(alpha u y) du
* finite-N kernels sigma(x) K_N(x, y) after the bulk or hard-edge rescaling
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from .errors import DomainError, ResolutionError
from .specfun import (
    Quadrature,
    bessel_j,
    bessel_j_prime,
    composite_gauss_legendre,
    gauss_legendre,
    hermite_fns,
    laguerre_fns,
    panel_breaks,
)
from .symbols import Profile, as_profile
from .transforms import DEFAULT, CosineTable, TransformConfig, oscillatory_rule

KINDS = ("sine_WH", "bessel", "finite_WH", "hankel", "finiteN_hermite", "finiteN_laguerre")
MAX_FINITE_N = 300
CD_THRESHOLD = 50


# ---------------------------------------------------------------- limit kernels


def sine_kernel(x, y):
    """sin(x - y) / (pi (x - y)), continuous through x = y."""
    d = np.subtract(x, y, dtype=float)
    small = np.abs(d) < 1e-4
    safe = np.where(small, 1.0, d)
    d2 = d * d
    out = np.where(small, (1.0 - d2 / 6.0 + d2 * d2 / 120.0) / np.pi, np.sin(safe) / (np.pi * safe))
    return out.item() if out.ndim == 0 else out


def _bessel_diag(nu, x):
    r = np.sqrt(x)
    return 0.25 * (np.asarray(bessel_j(nu, r)) ** 2 - np.asarray(bessel_j(nu + 1, r)) * bessel_j(nu - 1, r))


def bessel_kernel(nu: float, x, y):
    """Hard-edge Bessel kernel in the variables x, y > 0."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("bessel_kernel needs x, y > 0")
    rx, ry = np.sqrt(x), np.sqrt(y)
    jx, jy = np.asarray(bessel_j(nu, rx)), np.asarray(bessel_j(nu, ry))
    dx, dy = np.asarray(bessel_j_prime(nu, rx)), np.asarray(bessel_j_prime(nu, ry))
    d = x - y
    # inside the band the quotient loses digits; the diagonal at the midpoint is
    # exact to first order in x - y because K is symmetric
    band = np.abs(d) < 1e-6
    safe = np.where(band, 1.0, d)
    off = (jx * ry * dy - rx * dx * jy) / (2.0 * safe)
    out = np.where(band, _bessel_diag(nu, 0.5 * (x + y)), off)
    return out.item() if out.ndim == 0 else out


# ---------------------------------------------------------------- finite-N kernels


def _check_finite(ensemble: str, N: int, nu: float):
    if ensemble not in ("hermite", "laguerre"):
        raise DomainError(f"unknown ensemble {ensemble!r}")
    if not 1 <= N <= MAX_FINITE_N:
        raise DomainError(f"N={N} outside the stability envelope [1, {MAX_FINITE_N}]")
    if ensemble == "laguerre" and nu <= -1:
        raise DomainError("laguerre needs nu > -1")


def _fns(ensemble: str, n: int, nu: float, x):
    return hermite_fns(n, x) if ensemble == "hermite" else laguerre_fns(n, nu, x)


def finite_n_kernel(ensemble: str, N: int, nu: float, x, y, form: str = "auto"):
    """K_N(x, y) = sum_{i<N} phi_i(x) phi_i(y).

    ``form="auto"`` sums directly for N <= 50 and uses the two-term
    Christoffel-Darboux expression away from the diagonal for larger N.
    """
    _check_finite(ensemble, N, nu)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if form == "auto":
        form = "sum" if N <= CD_THRESHOLD else "cd"
    px = _fns(ensemble, N + 1, nu, x)
    py = _fns(ensemble, N + 1, nu, y)
    summed = np.einsum("i...,i...->...", px[:N], py[:N])
    if form == "sum":
        out = summed
    else:
        if ensemble == "hermite":
            c = math.sqrt(N / 2.0)
        else:
            c = -math.sqrt(N * (N + nu))
        d = x - y
        near = np.abs(d) < 1e-6 * (1.0 + np.abs(x))
        safe = np.where(near, 1.0, d)
        cd = c * (px[N] * py[N - 1] - px[N - 1] * py[N]) / safe
        out = np.where(near, summed, cd)
    return out.item() if out.ndim == 0 else out


def _scale(ensemble: str, N: int) -> float:
    return math.sqrt(2.0 * N) if ensemble == "hermite" else 4.0 * N


def rescaled_finite_n_kernel(ensemble: str, N: int, nu: float, x, y, form: str = "auto"):
    """Bulk (hermite) or hard-edge (laguerre) rescaling of K_N."""
    c = _scale(ensemble, N)
    out = np.asarray(finite_n_kernel(ensemble, N, nu, np.divide(x, c), np.divide(y, c), form)) / c
    return out.item() if out.ndim == 0 else out


def rescaled_gram(ensemble: str, N: int, nu: float, xs) -> np.ndarray:
    """Matrix of rescaled K_N on the points xs (summed form, one recurrence pass)."""
    _check_finite(ensemble, N, nu)
    c = _scale(ensemble, N)
    phi = _fns(ensemble, N, nu, np.asarray(xs, dtype=float) / c)
    return phi.T @ phi / c


# ---------------------------------------------------------------- operator container


@dataclass(frozen=True)
class Provenance:
    kind: str
    alpha: float = float("nan")
    nu: float = float("nan")
    N: int = 0
    k: float = float("nan")
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS and self.kind not in ("identity", "product", "sum", "custom"):
            raise ValueError(f"unknown operator kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class DiscretizedOperator:
    """Kernel values K(x_i, x_j) on a quadrature grid."""

    grid: Quadrature
    matrix: np.ndarray
    provenance: Provenance
    tail_estimate: float = 0.0
    kernel: Optional[Callable] = field(default=None, repr=False)  # K(x, y) off the grid

    def __post_init__(self):
        n = len(self.grid)
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match grid size {n}")

    @property
    def n(self) -> int:
        return len(self.grid)

    def __add__(self, other: "DiscretizedOperator") -> "DiscretizedOperator":
        _same_grid(self, other)
        kern = None
        if self.kernel is not None and other.kernel is not None:
            kern = lambda x, y, a=self.kernel, b=other.kernel: a(x, y) + b(x, y)
        return DiscretizedOperator(
            self.grid,
            self.matrix + other.matrix,
            replace(self.provenance, kind="sum"),
            self.tail_estimate + other.tail_estimate,
            kern,
        )

    def scaled(self, c: complex) -> "DiscretizedOperator":
        kern = None if self.kernel is None else (lambda x, y, a=self.kernel: c * a(x, y))
        return DiscretizedOperator(self.grid, c * self.matrix, self.provenance, abs(c) * self.tail_estimate, kern)

    def conj(self) -> "DiscretizedOperator":
        kern = None if self.kernel is None else (lambda x, y, a=self.kernel: np.conj(a(x, y)))
        return DiscretizedOperator(self.grid, np.conj(self.matrix), self.provenance, self.tail_estimate, kern)


def _same_grid(a: DiscretizedOperator, b: DiscretizedOperator):
    if a.grid is b.grid:
        return
    if (
        len(a.grid) != len(b.grid)
        or not np.array_equal(a.grid.nodes, b.grid.nodes)
        or not np.array_equal(a.grid.weights, b.grid.weights)
    ):
        raise ValueError("operators live on different grids")


def op_compose(A: DiscretizedOperator, B: DiscretizedOperator) -> DiscretizedOperator:
    """Quadrature-weighted product sum_l A(x_i, x_l) w_l B(x_l, x_j)."""
    _same_grid(A, B)
    mat = (A.matrix * A.grid.weights[None, :]) @ B.matrix
    return DiscretizedOperator(A.grid, mat, replace(A.provenance, kind="product"), A.tail_estimate + B.tail_estimate)


def nystrom_identity(grid: Quadrature) -> DiscretizedOperator:
    """The identity operator in kernel form: delta_ij / w_i."""
    return DiscretizedOperator(grid, np.diag(1.0 / grid.weights), Provenance("identity"))


def rescale_grid(op: DiscretizedOperator, c: float) -> DiscretizedOperator:
    """Unitary change of variables X = c x: K'(X, Y) = K(X/c, Y/c) / c."""
    a, b = op.grid.interval
    grid = Quadrature(c * op.grid.nodes, c * op.grid.weights, (c * a, c * b))
    kern = None if op.kernel is None else (lambda x, y, k=op.kernel: k(x / c, y / c) / c)
    return DiscretizedOperator(grid, op.matrix / c, op.provenance, op.tail_estimate, kern)


# ---------------------------------------------------------------- grids


def graded_rule(n: int, a: float, b: float, levels: int = 8, per_graded: int = 8, ratio: float = 0.5) -> Quadrature:
    """Composite Gauss-Legendre rule with geometric refinement towards ``a``.

    Used where kernels behave like powers of (x - a); falls back to a plain
    n-point rule when n is too small to afford the refinement.
    """
    if n < 4 * levels * per_graded // 2 or levels == 0:
        return gauss_legendre(n, a, b)
    L = b - a
    first = ratio ** (levels - 1) * 0.125
    graded = a + L * np.concatenate(([0.0], first / ratio ** np.arange(levels)))  # up to a + L/8
    rest_nodes = n - levels * per_graded
    per = 16
    panels = max(1, rest_nodes // per)
    uniform = np.linspace(graded[-1], b, panels + 1)
    rule_g = composite_gauss_legendre(graded, per_graded)
    rule_u = composite_gauss_legendre(uniform, per)
    nodes = np.concatenate((rule_g.nodes, rule_u.nodes))
    weights = np.concatenate((rule_g.weights, rule_u.weights))
    weights *= L / weights.sum()
    return Quadrature(nodes, weights, (float(a), float(b)))


# ---------------------------------------------------------------- convolution-type operators


def _table(sigma, zmax: float, cfg: TransformConfig) -> CosineTable:
    return CosineTable(as_profile(sigma, cfg.truncation_radius), zmax, cfg)


def _k_of(sigma) -> float:
    return float(getattr(sigma, "k", float("nan")))


def difference_kernel(sigma, zmax: float, cfg: TransformConfig = DEFAULT):
    """(x, y) -> (1/pi) C(sigma)(x - y), tabulated for |x - y| <= zmax."""
    tab = _table(sigma, zmax, cfg)
    return lambda x, y: tab(np.subtract(x, y)) / np.pi


def sum_kernel(sigma, zmax: float, cfg: TransformConfig = DEFAULT):
    """(x, y) -> (1/pi) C(sigma)(x + y), tabulated for x + y <= zmax."""
    tab = _table(sigma, zmax, cfg)
    return lambda x, y: tab(np.add(x, y)) / np.pi


def _from_kernel(kern, grid: Quadrature, prov: Provenance) -> DiscretizedOperator:
    x = grid.nodes
    mat = np.asarray(kern(x[:, None], x[None, :]))
    return DiscretizedOperator(grid, mat, prov, kernel=kern)


def build_wiener_hopf(sigma, alpha: float, n: int, cfg: TransformConfig = DEFAULT, grid: Optional[Quadrature] = None):
    """A_alpha(sigma): kernel (1/pi) C(sigma)(x - y) on (-alpha, alpha)."""
    _check_alpha_n(alpha, n, 1000)
    grid = grid or gauss_legendre(n, -alpha, alpha)
    kern = difference_kernel(sigma, 2.0 * alpha, cfg)
    return _from_kernel(kern, grid, Provenance("sine_WH", alpha=alpha, k=_k_of(sigma)))


def build_finite_wh(sigma, alpha: float, n: int, cfg: TransformConfig = DEFAULT, grid: Optional[Quadrature] = None):
    """W_alpha(sigma): kernel (1/pi) C(sigma)(x - y) on (0, alpha)."""
    _check_alpha_n(alpha, n, 1000)
    grid = grid or gauss_legendre(n, 0.0, alpha)
    kern = difference_kernel(sigma, alpha, cfg)
    return _from_kernel(kern, grid, Provenance("finite_WH", alpha=alpha, k=_k_of(sigma)))


def build_hankel(sigma, alpha: float, n: int, cfg: TransformConfig = DEFAULT, grid: Optional[Quadrature] = None):
    """H_alpha(sigma): kernel (1/pi) C(sigma)(x + y) on (0, alpha)."""
    _check_alpha_n(alpha, n, 1000)
    grid = grid or gauss_legendre(n, 0.0, alpha)
    kern = sum_kernel(sigma, 2.0 * alpha, cfg)
    return _from_kernel(kern, grid, Provenance("hankel", alpha=alpha, k=_k_of(sigma)))


def _check_alpha_n(alpha, n, nmax):
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if not 1 <= n <= nmax:
        raise DomainError(f"grid size {n} outside [1, {nmax}]")


# ---------------------------------------------------------------- Bessel operator


def _lead_hankel(p: Profile, nu: float, s, t):
    out = 0.0
    for c, g in p.leads:
        if g.hankel_closed_form is None:
            raise ValueError(f"leading term {g.id} has no closed-form Hankel integral")
        out = out + c * g.hankel_closed_form(nu, s, t)
    return out


def _tail_bound(p: Profile, R: float, alpha: float) -> float:
    # |sqrt(x) J_nu(alpha u x)| <= 1 once alpha u >= 2/pi, for nu >= -1/2
    if R == 0.0:
        return 0.0
    val, _ = integrate.quad(lambda u: u * float(p.envelope(np.array(u))), R, np.inf, limit=200)
    return alpha * alpha * val


def bessel_rest_rule(p: Profile, alpha: float, cfg: TransformConfig) -> Quadrature | None:
    """u-quadrature for the numerically integrated part of B_alpha's kernel."""
    R = cfg.truncation_radius if cfg.truncation_radius is not None else p.radius(cfg.tol)
    if R == 0.0:
        return None
    # J_nu(alpha u x) J_nu(alpha u y) oscillates with frequency up to 2 alpha in u
    return oscillatory_rule(0.0, R, 2.0 * alpha, cfg)


def bessel_kernel_fn(sigma, alpha: float, nu: float, cfg: TransformConfig = DEFAULT):
    """Continuous kernel (x, y) -> B_alpha(sigma)(x, y) on (0, 1)^2."""
    p = as_profile(sigma, cfg.truncation_radius)
    rule = bessel_rest_rule(p, alpha, cfg)
    if rule is not None:
        wr = rule.weights * rule.nodes * p.rest(rule.nodes)
        u = rule.nodes

    def kern(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = alpha * alpha * np.sqrt(x * y) * _lead_hankel(p, nu, alpha * x, alpha * y) if p.leads else 0.0
        out = np.zeros(x.shape, dtype=complex) + out
        if rule is not None:
            jx = special.jv(nu, alpha * np.multiply.outer(x, u))
            jy = special.jv(nu, alpha * np.multiply.outer(y, u))
            out = out + alpha * alpha * np.sqrt(x * y) * np.einsum("...l,...l,l->...", jx, jy, wr)
        return out.real if p.is_real else out

    return kern


def build_bessel_operator(
    sigma,
    alpha: float,
    nu: float,
    n: int,
    cfg: TransformConfig = DEFAULT,
    grid: Optional[Quadrature] = None,
) -> DiscretizedOperator:
    """B_alpha(sigma) on (0, 1) with Hankel-type kernel of order nu."""
    _check_alpha_n(alpha, n, 1000)
    if nu < -0.5:
        raise DomainError("nu must be >= -1/2")
    p = as_profile(sigma, cfg.truncation_radius)
    grid = grid or graded_rule(n, 0.0, 1.0)
    x = grid.nodes
    sx = np.sqrt(x)
    mat = np.zeros((x.size, x.size), dtype=complex)
    if p.leads:
        mat += alpha * alpha * np.outer(sx, sx) * _lead_hankel(p, nu, alpha * x[:, None], alpha * x[None, :])
    rule = bessel_rest_rule(p, alpha, cfg)
    tail = 0.0
    if rule is not None:
        u = rule.nodes
        J = sx[:, None] * special.jv(nu, alpha * np.outer(x, u))
        wr = rule.weights * u * p.rest(u)
        mat += alpha * alpha * (J * wr[None, :]) @ J.T
        tail = _tail_bound(p, rule.interval[1], alpha)
    if p.is_real:
        mat = mat.real
    prov = Provenance("bessel", alpha=alpha, nu=nu, k=_k_of(sigma))
    return DiscretizedOperator(grid, mat, prov, tail, bessel_kernel_fn(p, alpha, nu, cfg))


def _h_minus(nu: float, z):
    """(z/2)[J_nu^2 - J_{nu+1} J_{nu-1}](z) - 1/pi."""
    return 0.5 * z * (special.jv(nu, z) ** 2 - special.jv(nu + 1, z) * special.jv(nu - 1, z)) - 1.0 / np.pi


def bessel_trace(sigma, alpha: float, nu: float, cfg: TransformConfig = DEFAULT, x_nodes: int = 600):
    """tr B_alpha(sigma) without forming the operator.

    The x-integral of the diagonal is done in closed form for the numeric
    part: tr = alpha int_0^inf g(u) h(alpha u) du with
    h(z) = (z/2)[J_nu^2 - J_{nu+1}J_{nu-1}](z) -> 1/pi. Closed-form leading
    terms are integrated along the diagonal in x instead.
    """
    p = as_profile(sigma, cfg.truncation_radius)
    total = 0.0 + 0.0j
    if p.leads:
        q = graded_rule(x_nodes, 0.0, 1.0, levels=14)
        diag = alpha * alpha * q.nodes * _lead_hankel(p, nu, alpha * q.nodes, alpha * q.nodes)
        total += q.integrate(diag)
    R = cfg.truncation_radius if cfg.truncation_radius is not None else p.radius(cfg.tol)
    if R > 0:
        # the 1/pi part integrates the rest directly; the oscillatory remainder
        # decays like 1/(alpha u) and is cut at the same radius
        rule = oscillatory_rule(0.0, R, 2.0 * alpha, cfg)
        g = p.rest(rule.nodes)
        total += alpha / np.pi * rule.integrate(g) + alpha * rule.integrate(g * _h_minus(nu, alpha * rule.nodes))
    return total.real if p.is_real else complex(total)


def bessel_trace_square(sigma, alpha: float, nu: float, n: int = 200, cfg: TransformConfig = DEFAULT, inner_per: int = 4):
    """tr B_alpha(sigma)^2 = int int K(x, y)^2 dx dy (the kernel is symmetric).

    Kernels built from algebraically decaying functions have a corner on the
    diagonal that a plain Nystrom product does not resolve. Here the inner
    y-rule has a panel break at every outer node, so each corner y = x_i sits
    on a panel boundary.
    """
    _check_alpha_n(alpha, n, 2000)
    p = as_profile(sigma, cfg.truncation_radius)
    outer = graded_rule(n, 0.0, 1.0)
    x = outer.nodes
    inner = composite_gauss_legendre(np.unique(np.concatenate(([0.0], x, [1.0]))), inner_per)
    y = inner.nodes
    K = np.zeros((x.size, y.size), dtype=complex)
    if p.leads:
        K += alpha * alpha * np.sqrt(np.outer(x, y)) * _lead_hankel(p, nu, alpha * x[:, None], alpha * y[None, :])
    rule = bessel_rest_rule(p, alpha, cfg)
    if rule is not None:
        u = rule.nodes
        wr = rule.weights * u * p.rest(u)
        Jx = np.sqrt(x)[:, None] * special.jv(nu, alpha * np.outer(x, u))
        Jy = np.sqrt(y)[:, None] * special.jv(nu, alpha * np.outer(y, u))
        K += alpha * alpha * (Jx * wr[None, :]) @ Jy.T
    val = outer.weights @ ((K * K) @ inner.weights)
    return float(val.real) if p.is_real else complex(val)


# ---------------------------------------------------------------- finite-N operators


MAX_FINITE_N_NODES = 6000


def finite_n_domain(ensemble: str, N: int, p: Profile, tol: float = 1e-14) -> tuple[float, float]:
    """Truncated integration domain for sigma(x) K_N(x, x) in rescaled variables.

    Hermite lives on the real line in s = x sqrt(2N); Laguerre is written in
    r = sqrt(4N x) so that the statistic reads f(r).
    """
    try:
        R = p.radius(tol) if not p.leads else decay_radius_full(p, tol)
    except ValueError:
        R = np.inf
    if ensemble == "hermite":
        edge = 2.0 * N + 20.0 * N ** (1.0 / 3.0)
        R = min(R, edge)
        return -R, R
    edge = 4.0 * N + 20.0 * N ** (1.0 / 3.0)
    return 0.0, min(R, edge)


def decay_radius_full(p: Profile, tol: float) -> float:
    from .symbols import decay_radius

    return decay_radius(p.full_envelope, tol)


def finite_n_grid(ensemble: str, a: float, b: float, n: Optional[int] = None, refine: int = 1) -> Quadrature:
    # the rescaled kernel oscillates like the sine kernel, period 2 pi in s;
    # in r = sqrt(s) the local period shrinks like pi / r
    if ensemble == "hermite":
        breaks = panel_breaks(a, b, 1.0 / refine)
        return composite_gauss_legendre(breaks, 16) if n is None else gauss_legendre(n, a, b)
    if n is not None:
        return graded_rule(n, a, b)
    width = min(1.0, max(0.25, 2.0 / max(b, 1.0))) / refine
    per = max(1, int(math.ceil((b - a) / width)))
    return graded_rule(8 * 8 + 16 * per, a, b)


def build_finite_n_operator(
    ensemble: str,
    N: int,
    nu: float,
    sigma,
    n: Optional[int] = None,
    tol: float = 1e-14,
    grid: Optional[Quadrature] = None,
    refine: int = 1,
) -> DiscretizedOperator:
    """sigma(x) K_N(x, y) in rescaled variables on a truncated domain.

    Hermite: kernel sigma(s) K~(s, t), K~(s, t) = K_N(s/sqrt(2N), t/sqrt(2N))/sqrt(2N).
    Laguerre: kernel sigma(r) 2 sqrt(r r') K~(r^2, r'^2), K~ = K_N(./4N, ./4N)/4N.
    Both have Fredholm determinant E exp(ik sum f) for sigma = exp(ikf) - 1.
    """
    _check_finite(ensemble, N, nu)
    p = as_profile(sigma)
    if grid is None:
        a, b = finite_n_domain(ensemble, N, p, tol)
        if b <= a:
            # the symbol vanishes identically; any small grid carries the zero operator
            a, b = (-1.0, 1.0) if ensemble == "hermite" else (0.0, 1.0)
        grid = finite_n_grid(ensemble, a, b, n, refine)
    if len(grid) > MAX_FINITE_N_NODES:
        raise ResolutionError(
            f"finite-N grid needs {len(grid)} nodes (cap {MAX_FINITE_N_NODES}); the symbol decays too slowly"
        )
    x = grid.nodes
    if ensemble == "hermite":
        K = rescaled_gram("hermite", N, nu, x)
    else:
        # x is r here; the Jacobian of s = r^2 splits as sqrt(2r) sqrt(2r')
        h = np.sqrt(x)
        K = 2.0 * np.outer(h, h) * rescaled_gram("laguerre", N, nu, x * x)
    mat = p(x)[:, None] * K
    if p.is_real:
        mat = np.real(mat)
    kind = "finiteN_" + ensemble
    return DiscretizedOperator(grid, mat, Provenance(kind, nu=nu, N=N, k=_k_of(sigma)))

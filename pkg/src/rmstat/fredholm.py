"""Traces and Fredholm determinants of discretized operators.

det(I + K) is approximated by det(I + S) with S = w^(1/2) K w^(1/2) on the
operator's quadrature grid (Nystrom). The determinant comes from a pivoted
LU factorization; its logarithm is the sum of the logs of U's diagonal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from .errors import DomainError, SingularOperatorError
from .operators import (
    DiscretizedOperator,
    build_bessel_operator,
    build_finite_n_operator,
    build_wiener_hopf,
)
from .symbols import TestFunction, make_symbol
from .transforms import DEFAULT, TransformConfig

RCOND_FLOOR = 1e-14


@dataclass(frozen=True)
class DetResult:
    value: complex
    log_value: complex
    condition_estimate: float
    grid_size: int
    branch: str = "principal"  # or "continuous" when the log was tracked along a path

    def __post_init__(self):
        if self.branch not in ("principal", "continuous"):
            raise ValueError(f"unknown branch flag {self.branch!r}")


def _sym(K: DiscretizedOperator) -> np.ndarray:
    s = np.sqrt(K.grid.weights)
    return s[:, None] * K.matrix * s[None, :]


def op_trace(K: DiscretizedOperator) -> complex:
    """sum_i w_i K(x_i, x_i)."""
    val = K.grid.weights @ np.diag(K.matrix)
    return complex(val) if np.iscomplexobj(val) else float(val)


def op_trace_power(K: DiscretizedOperator, n: int) -> complex:
    """Trace of the n-fold quadrature-weighted product of K with itself."""
    if not 1 <= n <= 6:
        raise DomainError("trace powers are supported for 1 <= n <= 6")
    if n == 1:
        return op_trace(K)
    S = _sym(K)
    P = np.linalg.matrix_power(S, n - 1)
    val = np.sum(P * S.T)  # tr(P S) without forming the product
    return complex(val) if np.iscomplexobj(val) else float(val)


def fredholm_det(K: DiscretizedOperator) -> DetResult:
    """det(I + K) on the grid of K."""
    S = _sym(K)
    n = S.shape[0]
    M = np.eye(n, dtype=S.dtype) + S
    anorm = np.max(np.sum(np.abs(M), axis=0)) if n else 1.0
    lu, piv = linalg.lu_factor(M, check_finite=True)
    d = np.diag(lu)
    if n and np.min(np.abs(d)) == 0.0:
        raise SingularOperatorError("I + K is exactly singular on this grid")
    gecon = lapack.get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise RuntimeError(f"gecon failed with info={info}")
    if n and rcond < RCOND_FLOOR:
        raise SingularOperatorError(f"I + K is numerically singular (rcond={rcond:.2e})")
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    logs = np.log(d.astype(complex))
    log_value = complex(np.sum(logs)) + (1j * math.pi if swaps % 2 else 0.0)
    # fold into the principal branch; path continuation is the caller's job
    log_value = complex(log_value.real, math.remainder(log_value.imag, 2 * math.pi))
    value = cmath.exp(log_value)
    return DetResult(value, log_value, float(1.0 / rcond) if n else 1.0, n, "principal")


def build_operator(
    ensemble: str,
    f,
    k: float,
    scale: float,
    nu: float = 0.0,
    n: Optional[int] = None,
    cfg: TransformConfig = DEFAULT,
) -> DiscretizedOperator:
    """The operator whose Fredholm determinant is the characteristic function at k.

    ``ensemble`` is one of sine, bessel, finiteN_hermite, finiteN_laguerre;
    ``scale`` is alpha for the limit ensembles and N for the finite ones. A
    TestFunction ``f`` is turned into the symbol exp(ikf) - 1; anything else
    is passed through as the symbol itself.
    """
    sigma = make_symbol(f, k) if isinstance(f, TestFunction) else f
    if ensemble == "sine":
        return build_wiener_hopf(sigma, scale, n or 400, cfg)
    if ensemble == "bessel":
        return build_bessel_operator(sigma, scale, nu, n or 200, cfg)
    if ensemble in ("finiteN_hermite", "finiteN_laguerre"):
        return build_finite_n_operator(ensemble.split("_")[1], int(scale), nu, sigma, n)
    raise DomainError(f"unknown ensemble {ensemble!r}")


def characteristic_function(
    ensemble: str,
    f: TestFunction,
    k: float,
    scale: float,
    nu: float = 0.0,
    n: Optional[int] = None,
    cfg: TransformConfig = DEFAULT,
    continuous: bool = False,
) -> DetResult:
    """phi(k) = det(I + operator with symbol exp(ikf) - 1).

    With ``continuous=True`` the log is carried along k' in [0, k] so that
    its imaginary part is the branch continuous from log phi(0) = 0.
    """
    build = lambda kk: build_operator(ensemble, f, kk, scale, nu, n, cfg)
    if not continuous or k == 0:
        return fredholm_det(build(k))
    return log_det_path(build, [k])[-1]


def log_det_path(
    build: Callable[[float], DiscretizedOperator],
    ks: Sequence[float],
    max_step: float = math.pi / 4,
    min_dk: float = 1e-6,
) -> list[DetResult]:
    """Determinants at each k in ``ks`` with log branches continuous from k = 0.

    Walks from 0 to each target. A step is accepted when the principal
    argument moves by less than ``max_step`` over it and over both of its
    halves, and the halves add up to the whole; otherwise the step is
    halved. The midpoint check stops a move of nearly 2 pi from passing as
    a small one.
    """
    dets: dict[float, DetResult] = {}

    def det(k: float) -> DetResult:
        if k not in dets:
            dets[k] = fredholm_det(build(k))
        return dets[k]

    out = []
    for target in ks:
        k_cur, log_cur = 0.0, 0.0j
        step = target
        res = None
        while k_cur != target:
            k_next = target if abs(target - k_cur) <= abs(step) else k_cur + step
            res = det(k_next)
            mid = det(0.5 * (k_cur + k_next))
            jump = math.remainder(res.log_value.imag - log_cur.imag, 2 * math.pi)
            j1 = math.remainder(mid.log_value.imag - log_cur.imag, 2 * math.pi)
            j2 = math.remainder(res.log_value.imag - mid.log_value.imag, 2 * math.pi)
            smooth = max(abs(jump), abs(j1), abs(j2)) <= max_step and abs(j1 + j2 - jump) < 1e-9
            if not smooth and abs(k_next - k_cur) > min_dk:
                step = 0.5 * (k_next - k_cur)
                continue
            log_cur = complex(res.log_value.real, log_cur.imag + jump)
            k_cur = k_next
            step = 2 * step if abs(2 * step) <= abs(target) else step
        if res is None:
            res = det(0.0)
        out.append(DetResult(cmath.exp(log_cur), log_cur, res.condition_estimate, res.grid_size, "continuous"))
    return out


def self_convergence(build: Callable[[int], DiscretizedOperator], n: int, what: str = "det") -> tuple[complex, complex]:
    """Quantity at grid n and 2n (determinant by default, or ``trace``)."""
    fn = (lambda K: fredholm_det(K).value) if what == "det" else op_trace
    return fn(build(n)), fn(build(2 * n))

"""Exact sampling of Hermite and Laguerre eigenvalues and Monte Carlo estimates.

Reduced models (beta = 2), scaled to the weights used throughout the package:

hermite, weight exp(-x^2):
    symmetric tridiagonal, diagonal ~ N(0, 1/2), off-diagonal i ~ chi_{2(N-i)} / 2
laguerre, weight x^nu exp(-x):
    lower bidiagonal B with diagonal chi_{2(nu+N-i+1)} and subdiagonal chi_{2(N-i)};
    eigenvalues of B B^T / 2

These parameterizations are certified by the N = 1 closed forms and by the
one-point density test against K_N(x, x), not taken on trust.

Replicate m draws from the stream SeedSequence(seed, spawn_key=(m,)), so
results depend only on (seed, spec, M) and never on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg, stats

from .errors import ConvergenceError, DomainError
from .operators import build_finite_n_operator, finite_n_kernel
from .specfun import gauss_legendre
from .symbols import TestFunction, function_profile, make_symbol, square_profile


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    N: int
    nu: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("hermite", "laguerre"):
            raise DomainError(f"unknown ensemble {self.kind!r}")
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if self.kind == "laguerre" and self.nu <= -1:
            raise DomainError("laguerre needs nu > -1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McRunReport:
    statistic_id: str
    replicate_count: int
    mean_hat: float
    mean_se: float
    var_hat: float
    var_se: float
    cf_hat: dict = field(default_factory=dict)  # k -> complex
    cf_se: dict = field(default_factory=dict)  # k -> complex(se of real part, se of imaginary part)
    seeds: dict = field(default_factory=dict)


def replicate_rng(seed: int, m: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(m,)))


def tridiag_eigenvalues(diag: Sequence[float], offdiag: Sequence[float]) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    LAPACK's root-free implicit QL/QR (sterf, capped at 30 N sweeps) first;
    bisection (stebz) if it fails to converge.
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
        raise DomainError("offdiag must have exactly len(diag) - 1 entries")
    if d.size == 1:
        return d.copy()
    try:
        w = linalg.eigh_tridiagonal(d, e, eigvals_only=True, lapack_driver="sterf")
    except linalg.LinAlgError:
        try:
            w = linalg.eigh_tridiagonal(d, e, eigvals_only=True, lapack_driver="stebz")
        except linalg.LinAlgError as exc:
            raise ConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc
    return np.sort(w)


def _hermite_sample(N: int, rng: np.random.Generator) -> np.ndarray:
    d = rng.normal(0.0, math.sqrt(0.5), size=N)
    dof = 2.0 * np.arange(N - 1, 0, -1)
    e = np.sqrt(rng.chisquare(dof)) / 2.0 if N > 1 else np.empty(0)
    return tridiag_eigenvalues(d, e)


def _laguerre_sample(N: int, nu: float, rng: np.random.Generator) -> np.ndarray:
    i = np.arange(1, N + 1)
    a = np.sqrt(rng.chisquare(2.0 * (nu + N - i + 1)))
    b = np.sqrt(rng.chisquare(2.0 * np.arange(N - 1, 0, -1))) if N > 1 else np.empty(0)
    # singular values of the bidiagonal through the Golub-Kahan form: a
    # zero-diagonal tridiagonal of size 2N with off-diagonal a1, b1, a2, ...
    gk = np.empty(2 * N - 1)
    gk[0::2] = a
    gk[1::2] = b
    w = tridiag_eigenvalues(np.zeros(2 * N), gk)
    s = w[N:]
    if np.any(s <= 0):
        raise ConvergenceError("non-positive singular value in a Laguerre sample")
    return np.sort(s * s / 2.0)


def sample_spectrum(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """One draw of the N eigenvalues, ascending."""
    if spec.kind == "hermite":
        return _hermite_sample(spec.N, rng)
    return _laguerre_sample(spec.N, spec.nu, rng)


def linear_statistic(eigs, f: TestFunction, regime: str, N: int) -> float:
    """sum f(x sqrt(2N)) in the bulk, sum f(sqrt(4N x)) at the hard edge."""
    x = np.asarray(eigs, dtype=float)
    if regime == "bulk_hermite":
        return float(np.sum(f(x * math.sqrt(2.0 * N))))
    if regime == "hardedge_laguerre":
        if np.any(x < 0):
            raise DomainError("negative eigenvalue under the hard-edge scaling")
        return float(np.sum(f(np.sqrt(4.0 * N * x))))
    raise DomainError(f"unknown regime {regime!r}")


def _draw_block(spec: EnsembleSpec, start: int, stop: int) -> np.ndarray:
    return np.stack([sample_spectrum(spec, replicate_rng(spec.seed, m)) for m in range(start, stop)])


def draw_spectra(spec: EnsembleSpec, M: int, workers: int = 1, chunk: int = 500) -> np.ndarray:
    """M x N array of eigenvalues; row m always comes from stream m."""
    bounds = [(s, min(s + chunk, M)) for s in range(0, M, chunk)]
    if workers <= 1 or len(bounds) == 1:
        blocks = [_draw_block(spec, a, b) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_draw_block, spec, a, b) for a, b in bounds]
            blocks = [fu.result() for fu in futures]  # collected in index order
    return np.concatenate(blocks, axis=0)


def _jk_se(loo: np.ndarray) -> float:
    M = loo.size
    return float(math.sqrt((M - 1) / M * np.sum((loo - loo.mean()) ** 2)))


def jackknife_mean(x: np.ndarray) -> tuple[float, float]:
    M = x.size
    total = x.sum()
    loo = (total - x) / (M - 1)
    return float(total / M), _jk_se(loo)


def jackknife_var(x: np.ndarray) -> tuple[float, float]:
    M = x.size
    c = x - x.mean()  # centring keeps the power sums well conditioned
    s1, s2 = c.sum(), np.sum(c * c)
    full = (s2 - s1 * s1 / M) / (M - 1)
    r1, r2 = s1 - c, s2 - c * c
    loo = (r2 - r1 * r1 / (M - 1)) / (M - 2)
    return float(full), _jk_se(loo)


def estimate(
    spec: EnsembleSpec,
    f: TestFunction,
    regime: str,
    k_grid: Sequence[float],
    M: int,
    workers: int = 1,
) -> McRunReport:
    """Mean, variance and characteristic function of the linear statistic."""
    if M < 100:
        raise DomainError("need at least 100 replicates")
    expected = {"hermite": "bulk_hermite", "laguerre": "hardedge_laguerre"}[spec.kind]
    if regime != expected:
        raise DomainError(f"regime {regime!r} does not match the {spec.kind} ensemble")
    eigs = draw_spectra(spec, M, workers)
    S = np.array([linear_statistic(row, f, regime, spec.N) for row in eigs])
    mean, mean_se = jackknife_mean(S)
    var, var_se = jackknife_var(S)
    cf, cf_se = {}, {}
    for k in k_grid:
        k = float(k)
        ph = np.exp(1j * k * S)
        re, re_se = jackknife_mean(ph.real)
        im, im_se = jackknife_mean(ph.imag)
        cf[k] = complex(re, im)
        cf_se[k] = complex(re_se, im_se)
    return McRunReport(
        statistic_id=f.id,
        replicate_count=M,
        mean_hat=mean,
        mean_se=mean_se,
        var_hat=var,
        var_se=var_se,
        cf_hat=cf,
        cf_se=cf_se,
        seeds={"master": spec.seed, "stream": "SeedSequence(seed, spawn_key=(m,))"},
    )


# ---------------------------------------------------------------- operator-side predictions


@dataclass(frozen=True)
class FiniteNPrediction:
    mean: float
    variance: float
    cf: dict


def finite_n_prediction(
    spec: EnsembleSpec, f: TestFunction, k_grid: Sequence[float] = (), refine: int = 1
) -> FiniteNPrediction:
    """Exact finite-N moments from the correlation kernel.

    mean = tr(f K), var = tr(f^2 K) - tr((f K)^2), cf(k) = det(I + (e^{ikf} - 1) K).
    """
    from .fredholm import fredholm_det, op_trace, op_trace_power

    kind = spec.kind
    Kf = build_finite_n_operator(kind, spec.N, spec.nu, function_profile(f), refine=refine)
    Kf2 = build_finite_n_operator(kind, spec.N, spec.nu, square_profile(f), grid=Kf.grid)
    mean = float(np.real(op_trace(Kf)))
    var = float(np.real(op_trace(Kf2) - op_trace_power(Kf, 2)))
    cf = {}
    for k in k_grid:
        k = float(k)
        cf[k] = fredholm_det(build_finite_n_operator(kind, spec.N, spec.nu, make_symbol(f, k), refine=refine)).value
    return FiniteNPrediction(mean, var, cf)


# ---------------------------------------------------------------- distribution checks


def _bin_rule(spec: EnsembleSpec, edges: np.ndarray, per: int = 16):
    """Quadrature nodes and weights for each bin, shape (bins, nodes).

    Hermite bins are split into panels shorter than the local oscillation
    period. Laguerre bins are integrated in t = sqrt(x), where the hard-edge
    density is smooth and oscillates with period about pi / sqrt(N) in t.
    """
    g = gauss_legendre(per, -1.0, 1.0)
    if spec.kind == "hermite":
        ends, width = edges, 0.5 * math.pi / math.sqrt(2.0 * spec.N)
    else:
        ends, width = np.sqrt(np.maximum(edges, 0.0)), 0.5 * math.pi / math.sqrt(4.0 * spec.N)
    sub = max(1, int(math.ceil(np.max(np.diff(ends)) / width)))
    xs, ws = [], []
    for a, b in zip(ends[:-1], ends[1:]):
        br = np.linspace(a, b, sub + 1)
        half = 0.5 * np.diff(br)[:, None]
        t = (0.5 * (br[1:] + br[:-1]))[:, None] + half * g.nodes[None, :]
        w = half * g.weights[None, :]
        if spec.kind == "laguerre":
            t, w = t * t, 2.0 * t * w
        xs.append(t.ravel())
        ws.append(w.ravel())
    return np.array(xs), np.array(ws)


def _per_replicate_counts(idx: np.ndarray, nbins: int) -> np.ndarray:
    """(M, nbins) counts from bin indices of shape (M, m); -1 marks out-of-window."""
    M = idx.shape[0]
    flat = np.where(idx >= 0, idx + nbins * np.arange(M)[:, None], -1).ravel()
    flat = flat[flat >= 0]
    return np.bincount(flat, minlength=M * nbins).reshape(M, nbins).astype(float)


def _wald_chi2(counts: np.ndarray, expected: np.ndarray, min_expected: float = 5.0) -> tuple[float, int, float]:
    """Chi-square test of per-replicate bin counts against their exact means.

    Counts inside one replicate are correlated (and sub-Poissonian for a
    determinantal process), so the Pearson statistic is miscalibrated. The
    replicates are iid, so M (mean - mu)' S^+ (mean - mu) with the sample
    covariance S is asymptotically chi-square with rank(S) degrees of freedom.
    """
    M = counts.shape[0]
    use = M * expected >= min_expected
    c, mu = counts[:, use], expected[use]
    diff = c.mean(axis=0) - mu
    S = np.cov(c, rowvar=False)
    ev, vec = np.linalg.eigh(S)
    keep = ev > 1e-10 * ev.max()  # drops the fixed-total direction
    z = vec[:, keep].T @ diff
    chi2 = float(M * np.sum(z * z / ev[keep]))
    dof = int(np.count_nonzero(keep))
    return chi2, dof, float(stats.chi2.sf(chi2, dof))


def _bin_index(x: np.ndarray, edges: np.ndarray) -> np.ndarray:
    i = np.searchsorted(edges, x, side="right") - 1
    return np.where((x >= edges[0]) & (x < edges[-1]), i, -1)


def default_range(spec: EnsembleSpec) -> tuple[float, float]:
    """A window holding essentially all of the one-point density."""
    N = spec.N
    if spec.kind == "hermite":
        r = math.sqrt(2.0 * N) + 4.0 * N ** (-1.0 / 6.0) + 1.0
        return -r, r
    return 0.0, 4.0 * N + 2.0 * spec.nu + 12.0 * N ** (1.0 / 3.0) + 10.0


def density_chi2(spec: EnsembleSpec, M: int, bins: int = 40, window=None, workers: int = 1):
    """Pooled eigenvalue histogram against M int_bin K_N(x, x) dx.

    Returns (chi2, dof, p-value); bins with total expected count below 5 are dropped.
    """
    lo, hi = window or default_range(spec)
    edges = np.linspace(lo, hi, bins + 1)
    eigs = draw_spectra(spec, M, workers)
    idx = _bin_index(eigs, edges)
    x, w = _bin_rule(spec, edges)
    rho = finite_n_kernel(spec.kind, spec.N, spec.nu, x, x)
    return _wald_chi2(_per_replicate_counts(idx, bins), np.sum(w * rho, axis=1))


def pair_chi2(spec: EnsembleSpec, M: int, bins: int = 6, window=None, workers: int = 1):
    """Histogram of ordered eigenvalue pairs against M int_bin rho_2.

    rho_2(x, y) = K(x, x) K(y, y) - K(x, y)^2 is the 2 x 2 determinant.
    Ordered pairs make the 2-D histogram symmetric, so only cells on or
    above the diagonal enter the test.
    """
    lo, hi = window or default_range(spec)
    edges = np.linspace(lo, hi, bins + 1)
    eigs = draw_spectra(spec, M, workers)
    N = spec.N
    idx = _bin_index(eigs, edges)
    off = ~np.eye(N, dtype=bool)
    bi = np.broadcast_to(idx[:, :, None], (M, N, N))[:, off]
    bj = np.broadcast_to(idx[:, None, :], (M, N, N))[:, off]
    cell = np.where((bi >= 0) & (bj >= 0), bi * bins + bj, -1)
    counts = _per_replicate_counts(cell, bins * bins)
    x, w = _bin_rule(spec, edges, per=8)
    X = x.ravel()
    KK = finite_n_kernel(spec.kind, N, spec.nu, X[:, None], X[None, :])
    d = np.diag(KK)
    rho2 = (d[:, None] * d[None, :] - KK * KK).reshape(bins, x.shape[1], bins, x.shape[1])
    expected = np.einsum("ap,bq,apbq->ab", w, w, rho2).ravel()
    upper = np.triu_indices(bins)
    cells = upper[0] * bins + upper[1]
    return _wald_chi2(counts[:, cells], expected[cells])

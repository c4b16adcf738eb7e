import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmstat import symbols
from rmstat.errors import DomainError, SingularOperatorError
from rmstat.fredholm import (
    DetResult,
    build_operator,
    characteristic_function,
    fredholm_det,
    log_det_path,
    op_trace,
    op_trace_power,
    self_convergence,
)
from rmstat.operators import (
    DiscretizedOperator,
    Provenance,
    bessel_trace,
    bessel_trace_square,
    build_bessel_operator,
    build_finite_n_operator,
)
from rmstat.specfun import gauss_legendre
from rmstat.symbols import make_symbol, square_profile

G, C, Z = symbols.get("gaussian"), symbols.get("cauchy"), symbols.get("zero")


def _rank_one(u, grid):
    v = u(grid.nodes)
    return DiscretizedOperator(grid, np.outer(v, v), Provenance("custom"))


def test_zero_operator():
    K = build_bessel_operator(Z, 10.0, 0.0, 40)
    assert op_trace(K) == 0
    d = fredholm_det(K)
    assert d.value == 1 and d.log_value == 0


def test_rank_one():
    grid = gauss_legendre(20, 0.0, 1.0)
    K = _rank_one(lambda x: np.ones_like(x), grid)
    assert abs(fredholm_det(K).value - 2.0) < 1e-13
    K2 = _rank_one(lambda x: np.exp(-x) * np.cos(3 * x), grid)
    t = op_trace(K2)
    assert abs(op_trace_power(K2, 2) - t * t) < 1e-10
    assert abs(op_trace_power(K2, 4) - t**4) < 1e-10
    assert abs(fredholm_det(K2).value - (1 + t)) < 1e-12
    assert op_trace_power(K2, 1) == op_trace(K2)
    with pytest.raises(DomainError):
        op_trace_power(K2, 7)


def test_finite_n_trace_is_N():
    for ens, nu in (("hermite", 0.0), ("laguerre", 0.0), ("laguerre", 2.0)):
        # a symbol equal to 1 on the whole truncated domain
        one = symbols.as_profile(lambda u: np.ones_like(np.asarray(u, dtype=float)), radius=1e6)
        K = build_finite_n_operator(ens, 10, nu, one)
        assert abs(op_trace(K) - 10) < 1e-8


def test_bessel_trace_example():
    t = op_trace(build_bessel_operator(G, 30.0, 0.0, 200))
    assert abs(t - 30 / math.pi * math.sqrt(math.pi) / 2) < 0.05
    assert abs(t - 8.4624) < 0.05


def test_variance_assembly_cauchy_half_order():
    alpha = 40.0
    var = bessel_trace(square_profile(C), alpha, -0.5) - bessel_trace_square(C, alpha, -0.5)
    assert abs(var - 1 / 16) < 0.01


def test_det_result_invariants():
    K = build_operator("bessel", G, 0.4, 15.0, nu=0.0, n=80)
    d = fredholm_det(K)
    assert abs(cmath.exp(d.log_value) - d.value) <= 1e-10 * abs(d.value)
    assert d.grid_size == 80
    with pytest.raises(ValueError):
        DetResult(1, 0, 1.0, 1, branch="other")


def test_singular_operator_reported():
    grid = gauss_legendre(10, 0.0, 1.0)
    K = _rank_one(lambda x: np.ones_like(x), grid).scaled(-1.0)  # I - |1><1| kills the constant
    with pytest.raises(SingularOperatorError):
        fredholm_det(K)


def test_conjugate_symmetry_of_determinant():
    a = characteristic_function("bessel", G, 0.3, 20.0, nu=0.0)
    b = characteristic_function("bessel", G, -0.3, 20.0, nu=0.0)
    assert abs(a.value - np.conj(b.value)) < 1e-13


@pytest.mark.parametrize("ensemble,scale", [("sine", 10.0), ("bessel", 15.0), ("finiteN_hermite", 20), ("finiteN_laguerre", 20)])
def test_cf_at_zero_and_bounded(ensemble, scale):
    assert characteristic_function(ensemble, G, 0.0, scale).value == 1
    for k in (0.1, 0.2, 0.3, 0.4, 0.5):
        assert abs(characteristic_function(ensemble, G, k, scale).value) <= 1 + 1e-8


def test_first_cumulant_by_finite_difference():
    h, alpha = 1e-3, 20.0
    lp = characteristic_function("bessel", G, h, alpha, nu=0.0).log_value
    lm = characteristic_function("bessel", G, -h, alpha, nu=0.0).log_value
    tr = op_trace(build_bessel_operator(G, alpha, 0.0, 200))
    assert abs((lp - lm) / (2 * h) - 1j * tr) < 1e-4 * (1 + abs(tr))


@pytest.mark.parametrize("f", [G, symbols.get("bump")], ids=["gaussian", "bump"])
def test_second_cumulant_by_finite_difference(f):
    h, alpha, nu = 1e-2, 20.0, 0.0
    log = lambda k: characteristic_function("bessel", f, k, alpha, nu=nu).log_value
    second = (log(h) - 2 * log(0.0) + log(-h)) / (h * h)
    var = bessel_trace(square_profile(f), alpha, nu) - bessel_trace_square(f, alpha, nu)
    assert abs(second + var) < 1e-3 * var


def test_second_cumulant_sine():
    h, alpha = 1e-2, 10.0
    log = lambda k: characteristic_function("sine", G, k, alpha).log_value
    second = (log(h) - 2 * log(0.0) + log(-h)) / (h * h)
    A = build_operator("sine", symbols.function_profile(G), 0.0, alpha)
    A2 = build_operator("sine", square_profile(G), 0.0, alpha)
    var = op_trace(A2) - op_trace_power(A, 2)
    assert abs(second + var) < 1e-3 * var


def test_continuous_branch_tracks_large_phase():
    # at alpha = 40 the mean is about 11, so arg phi(1) wraps past pi
    res = characteristic_function("bessel", G, 1.0, 40.0, nu=0.0, continuous=True)
    assert res.branch == "continuous"
    mean = bessel_trace(G, 40.0, 0.0)
    assert abs(res.log_value.imag - mean) < 0.5
    princ = characteristic_function("bessel", G, 1.0, 40.0, nu=0.0)
    assert abs(cmath.exp(res.log_value) - princ.value) < 1e-10
    assert abs(princ.log_value.imag) <= math.pi


def test_cauchy_determinant_flags_slow_grid_convergence():
    # the Cauchy Bessel kernel has a corner on the diagonal; n vs 2n exposes it
    a, b = self_convergence(lambda n: build_operator("bessel", C, 0.2, 20.0, nu=0.0, n=n), 200)
    assert abs(a - b) > 1e-6


def test_log_det_path_multiple_targets():
    build = lambda k: build_operator("bessel", C, k, 20.0, nu=0.5, n=100)
    out = log_det_path(build, [0.5, -0.5])
    assert abs(out[0].log_value - np.conj(out[1].log_value)) < 1e-10


def test_self_convergence():
    a, b = self_convergence(lambda n: build_operator("bessel", G, 0.3, 20.0, nu=0.0, n=n), 100)
    assert abs(a - b) < 1e-6


@settings(max_examples=15, deadline=None)
@given(k=st.floats(-0.8, 0.8))
def test_finite_n_cf_bounded_and_conjugate(k):
    a = characteristic_function("finiteN_hermite", G, k, 10)
    b = characteristic_function("finiteN_hermite", G, -k, 10)
    assert abs(a.value) <= 1 + 1e-8
    assert abs(a.value - np.conj(b.value)) < 1e-13

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmstat.errors import DomainError
from rmstat.specfun import (
    Quadrature,
    bessel_j,
    bessel_j_prime,
    composite_gauss_legendre,
    gauss_legendre,
    hermite_fn,
    hermite_fns,
    laguerre_fn,
    laguerre_fns,
    log_gamma,
)


# ---------------------------------------------------------------- quadrature


def test_one_point_rule_is_midpoint():
    q = gauss_legendre(1, 0.0, 2.0)
    assert q.nodes.tolist() == [1.0]
    assert q.weights.tolist() == [2.0]


def test_two_point_rule_integrates_square():
    q = gauss_legendre(2, 0.0, 1.0)
    assert abs(q.integrate(q.nodes**2) - 1.0 / 3.0) < 1e-15


def test_weights_sum_to_length():
    assert abs(gauss_legendre(20, -1.0, 1.0).weights.sum() - 2.0) < 1e-14


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(1, 40),
    a=st.floats(-5, 5),
    width=st.floats(0.1, 10),
)
def test_monomial_exactness(n, a, width):
    b = a + width
    q = gauss_legendre(n, a, b)
    for d in range(2 * n):
        exact = (b ** (d + 1) - a ** (d + 1)) / (d + 1)
        scale = max(abs(a), abs(b)) ** (d + 1) / (d + 1) * 2
        assert abs(q.integrate(q.nodes**d) - exact) <= 1e-13 * max(scale, 1.0) * (d + 1)


def test_invalid_interval():
    with pytest.raises(DomainError):
        gauss_legendre(3, 1.0, 1.0)
    with pytest.raises(DomainError):
        gauss_legendre(0, 0.0, 1.0)


def test_quadrature_invariants_enforced():
    with pytest.raises(ValueError):
        Quadrature(np.array([0.5, 0.2]), np.array([0.5, 0.5]), (0.0, 1.0))
    with pytest.raises(ValueError):
        Quadrature(np.array([0.2, 0.5]), np.array([0.5, 0.6]), (0.0, 1.0))
    with pytest.raises(ValueError):
        Quadrature(np.array([0.0, 0.5]), np.array([0.5, 0.5]), (0.0, 1.0))


def test_composite_rule():
    q = composite_gauss_legendre([0.0, 0.5, 2.0, 3.0], 6)
    assert len(q) == 18
    assert abs(q.integrate(np.exp(q.nodes)) - (math.e**3 - 1)) < 1e-12


# ---------------------------------------------------------------- Bessel


def test_bessel_examples():
    assert bessel_j(0, 0.0) == 1.0
    assert abs(bessel_j(0.5, math.pi / 2) - 2 / math.pi) < 1e-15


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.5, 6.0])
def test_bessel_against_mpmath(nu):
    for x in [0.0, 1e-3, 0.7, 3.0, 9.9]:
        ref = float(mp.besselj(nu, x)) if x > 0 or nu >= 0 else None
        if ref is None:
            continue
        assert abs(bessel_j(nu, x) - ref) <= 1e-12
    for x in [12.0, 150.0, 2.5e3, 1e4]:
        ref = float(mp.besselj(nu, x))
        assert abs(bessel_j(nu, x) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.0])
def test_bessel_recurrence(nu):
    x = np.linspace(0.1, 100, 1000)
    J = bessel_j(nu, x)
    r = np.abs(bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - 2 * nu / x * J)
    assert np.all(r <= 1e-10 * np.maximum(1, np.abs(J)))


def test_bessel_derivative():
    x = np.array([0.3, 2.0, 17.0])
    ref = np.array([float(mp.besselj(1.5, t, derivative=1)) for t in x])
    assert np.max(np.abs(bessel_j_prime(1.5, x) - ref)) < 1e-13


def test_bessel_product_integral_tends_to_half():
    # int_0^T J_1 J_0 = (1 - J_0(T)^2) / 2; Cesaro averaging over T kills the oscillation
    from scipy import integrate

    T = 1e4
    direct = integrate.quad(lambda x: bessel_j(1, x) * bessel_j(0, x), 0, T, limit=20000)[0]
    assert abs(direct - 0.5 * (1 - bessel_j(0, T) ** 2)) < 1e-8
    Ts = np.linspace(T / 2, T, 2001)
    cesaro = np.mean(0.5 * (1 - bessel_j(0, Ts) ** 2))
    assert abs(cesaro - 0.5) < 1e-4


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(0, -1.0)
    with pytest.raises(DomainError):
        bessel_j(9.0, 1.0)


# ---------------------------------------------------------------- log Gamma


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert abs(log_gamma(0.5) - float(mp.log(mp.sqrt(mp.pi)))) < 1e-15


@pytest.mark.parametrize("z", [0.3, 1.7, 4.2])
def test_duplication(z):
    lhs = log_gamma(2 * z)
    rhs = log_gamma(z) + log_gamma(z + 0.5) + (2 * z - 1) * math.log(2) - 0.5 * math.log(math.pi)
    assert abs(lhs - rhs) < 1e-12


@settings(max_examples=50, deadline=None)
@given(z=st.floats(1e-3, 1e3))
def test_log_gamma_relative(z):
    ref = float(mp.loggamma(z))
    assert abs(log_gamma(z) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0.0)


# ---------------------------------------------------------------- orthonormal functions


def test_hermite_examples():
    assert abs(hermite_fn(0, 0.0) - math.pi**-0.25) < 1e-15
    assert hermite_fn(1, 0.0) == 0.0


def test_hermite_orthonormal():
    q = gauss_legendre(200, -20, 20)
    P = hermite_fns(21, q.nodes)
    G = (P * q.weights) @ P.T
    assert np.max(np.abs(G - np.eye(21))) < 1e-10


@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0])
def test_laguerre_orthonormal(nu):
    # x = t^2 turns x^nu dx into 2 t^(2 nu + 1) dt, smooth for these nu
    q = composite_gauss_legendre(np.linspace(0.0, math.sqrt(200.0), 60), 20)
    P = laguerre_fns(21, nu, q.nodes**2)
    G = (P * (2 * q.nodes * q.weights)) @ P.T
    assert np.max(np.abs(G - np.eye(21))) < 1e-9


def test_laguerre_examples():
    assert abs(laguerre_fn(0, 0.0, 1e-300) - 1.0) < 1e-15
    assert abs(laguerre_fn(0, 2.0, 1.0) - math.exp(-0.5) / math.sqrt(2)) < 1e-15


def _mp_hermite(i, x):
    return mp.hermite(i, x) * mp.exp(-x * x / 2) / mp.sqrt(mp.sqrt(mp.pi) * 2**i * mp.factorial(i))


def _mp_laguerre(i, nu, x):
    return mp.sqrt(mp.factorial(i) / mp.gamma(i + nu + 1)) * x ** (nu / 2) * mp.exp(-x / 2) * mp.laguerre(i, nu, x)


@pytest.mark.parametrize("i", [0, 1, 7, 23, 50])
def test_recurrences_match_direct(i):
    mp.mp.dps = 30
    for x in [0.0, 0.8, 3.3, 7.1]:
        assert abs(hermite_fn(i, x) - float(_mp_hermite(i, x))) < 1e-10
    for x in [0.05, 1.0, 12.0, 60.0]:
        assert abs(laguerre_fn(i, 0.5, x) - float(_mp_laguerre(i, 0.5, x))) < 1e-10


def test_index_and_domain_errors():
    with pytest.raises(DomainError):
        hermite_fn(501, 0.0)
    with pytest.raises(DomainError):
        laguerre_fn(0, -1.0, 1.0)
    with pytest.raises(DomainError):
        laguerre_fn(0, 0.0, 0.0)

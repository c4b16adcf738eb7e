import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from rmstat import symbols
from rmstat.symbols import (
    as_profile,
    catalog,
    function_profile,
    make_symbol,
    power_profile,
    square_profile,
    symbol_power,
    symbol_profile,
)

CATALOG = catalog()
IDS = [f.id for f in CATALOG]
xs = st.floats(-50, 50, allow_nan=False)


def test_catalog_contents():
    assert IDS == ["gaussian", "cauchy", "bump"]
    for f in CATALOG:
        assert f.smoothness >= 4
    assert symbols.get("gaussian").value_at_zero == 1.0
    assert abs(symbols.get("cauchy").integral_halfline - math.pi / 2) < 1e-15
    with pytest.raises(KeyError):
        symbols.get("nope")


def test_exponential_is_not_registered():
    assert "exponential" not in IDS
    f = symbols.exponential()
    assert f.smoothness < 4


def test_bump_compact_support():
    b = symbols.get("bump")
    x = np.linspace(2.0, 10.0, 50)
    assert np.all(b(x) == 0.0)
    assert np.all(b(-x) == 0.0)
    assert b(0.0) == 1.0


# independent mpmath forms of the catalog profiles
MP_FORMS = {
    "gaussian": (lambda t: mp.exp(-t * t), [0, 1, 4, mp.inf]),
    "cauchy": (lambda t: 1 / (1 + t * t), [0, 1, mp.inf]),
    "bump": (lambda t: mp.exp(1 - 1 / (1 - (t / 2) ** 2)) if t < 2 else mp.mpf(0), [0, 1, 2]),
}


@pytest.mark.parametrize("f", CATALOG, ids=IDS)
def test_metadata_against_quadrature(f):
    g, pts = MP_FORMS[f.id]
    assert abs(float(mp.quad(g, pts)) - f.integral_halfline) < 1e-8
    u = np.linspace(0, 1.9, 20)
    assert np.max(np.abs(f(u) - np.array([float(g(mp.mpf(float(t)))) for t in u]))) < 1e-14
    assert f(0.0) == f.value_at_zero
    assert f.integral_fullline == 2 * f.integral_halfline
    u = np.linspace(0, 3 * f.support_radius, 400)
    assert np.max(np.abs(f(u))) <= f.sup_norm + 1e-15
    assert np.all(np.abs(f(u)) <= f.envelope(u) + 1e-15)


@pytest.mark.parametrize("f", CATALOG, ids=IDS)
def test_decay_past_support_radius(f):
    R = f.support_radius
    x = R * np.linspace(1.0, 50.0, 200)
    assert np.max(np.abs(f(x))) <= 1e-6


@pytest.mark.parametrize("f", CATALOG, ids=IDS)
def test_cosine_closed_forms(f):
    if f.cosine_transform_closed_form is None:
        pytest.skip("no closed form")
    for x in [0.0, 0.4, 1.0, 3.0]:
        g, pts = MP_FORMS[f.id]
        if pts[-1] == mp.inf:
            ref = mp.quadosc(lambda t: g(t) * mp.cos(x * t), [0, mp.inf], omega=max(x, 0.5))
        else:
            ref = mp.quad(lambda t: g(t) * mp.cos(x * t), pts)
        assert abs(f.cosine_transform_closed_form(np.array(x)) - float(ref)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(x=xs)
def test_evenness(x):
    for f in CATALOG:
        assert f(x) == f(-x)


def test_make_symbol_examples():
    g = symbols.get("gaussian")
    s0 = make_symbol(g, 0.0)
    assert np.all(s0(np.linspace(-3, 3, 11)) == 0)
    s = make_symbol(g, 1.0)
    assert abs(s(0.0) - (cmath.exp(1j) - 1)) < 1e-15
    rng = np.random.default_rng(0)
    x = rng.uniform(-10, 10, 100)
    assert np.max(np.abs(np.abs(s(x) + 1) - 1)) < 1e-15


@settings(max_examples=40, deadline=None)
@given(k=st.floats(-3.0, 3.0), x=xs)
def test_principal_log_and_conjugation(k, x):
    for f in CATALOG:
        s = make_symbol(f, k)
        assert abs(np.log(1 + s(x)) - 1j * k * f(x)) < 1e-12
        assert abs(make_symbol(f, -k)(x) - np.conj(s(x))) < 1e-15


def test_symbol_power():
    f = symbols.get("cauchy")
    s = make_symbol(f, 0.7)
    x = np.linspace(-5, 5, 21)
    assert np.array_equal(symbol_power(s, 1)(x), s(x))
    e = np.exp(1j * 0.7 * f(x))
    assert np.max(np.abs(symbol_power(s, 2)(x) - (e * e - 2 * e + 1))) < 1e-14
    z = make_symbol(f, 0.0)
    for n in (1, 2, 5):
        assert np.all(symbol_power(z, n)(x) == 0)


@pytest.mark.parametrize("f", CATALOG, ids=IDS)
@pytest.mark.parametrize("k", [0.0, 0.2, -1.3])
def test_profiles_reproduce_pointwise_values(f, k):
    u = np.concatenate((np.linspace(0, 5, 50), [10.0, 100.0, 1e4]))
    s = make_symbol(f, k)
    assert np.max(np.abs(symbol_profile(s)(u) - s(u))) < 1e-15
    assert np.max(np.abs(function_profile(f)(u) - f(u))) < 1e-15
    assert np.max(np.abs(square_profile(f)(u) - f(u) ** 2)) < 1e-15
    for n in (1, 2, 3):
        assert np.max(np.abs(power_profile(s, n)(u) - s(u) ** n)) < 1e-14
    p = symbol_profile(s)
    assert np.all(np.abs(p.rest(u)) <= p.envelope(u) * (1 + 1e-12) + 1e-300)


def test_profile_algebra():
    f = symbols.get("cauchy")
    p = symbol_profile(make_symbol(f, 0.4))
    q = function_profile(symbols.get("gaussian"))
    u = np.linspace(0, 6, 31)
    assert np.max(np.abs((p + q)(u) - (p(u) + q(u)))) < 1e-15
    assert np.max(np.abs((p * q)(u) - p(u) * q(u))) < 1e-15
    assert np.max(np.abs(p.scaled(2j)(u) - 2j * p(u))) < 1e-15
    assert np.max(np.abs(p.conj()(u) - np.conj(p(u)))) < 1e-15
    with pytest.raises(TypeError):
        as_profile(lambda u: u)
    assert as_profile(lambda u: np.exp(-u), radius=5.0)(np.array([0.0]))[0] == 1.0


def test_expm1_tail_series():
    from rmstat.symbols import _expm1_tail

    z = np.array([1e-8j, 0.05j, 0.3j, -0.09 + 0.02j])
    for order in (2, 3):
        with mp.workdps(40):
            ref = [complex(mp.exp(mp.mpc(t)) - sum(mp.mpc(t) ** j / mp.factorial(j) for j in range(order))) for t in z]
        assert np.max(np.abs(_expm1_tail(z, order) - ref) / np.abs(ref)) < 1e-13

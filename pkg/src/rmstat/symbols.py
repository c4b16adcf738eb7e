"""Test functions f, the symbols sigma = exp(ikf) - 1, and their pointwise algebra.

Every function here is even: a ``TestFunction`` stores its profile on the
half line and evaluates at ``|x|``.

Transforms and operator builders do not consume test functions or symbols
directly; they consume a :class:`Profile`, which splits a function into an
optional closed-form *leading* part (a multiple of a catalog function whose
transforms are known exactly) plus a numerically integrated *rest* with a
known majorant. The split matters for algebraically decaying functions such
as the Cauchy profile, whose symbol decays only like ik/u^2 and cannot be
truncated at any reasonable radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

Array = np.ndarray


def decay_radius(envelope: Callable[[Array], Array], level: float, cap: float = 1e9) -> float:
    """Smallest R (to bisection accuracy) with envelope(u) <= level for u >= R.

    ``envelope`` must be non-increasing on [0, inf).
    """
    env = lambda u: float(np.asarray(envelope(np.asarray(u, dtype=float))))
    if env(0.0) <= level:
        return 0.0
    hi = 1.0
    while env(hi) > level:
        hi *= 2.0
        if hi > cap:
            raise ValueError(f"function does not decay below {level:g} before {cap:g}")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if env(mid) > level:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A real, even, continuous L1 function f that vanishes at infinity."""

    __test__ = False  # not a pytest class

    id: str
    profile: Callable[[Array], Array]  # f on [0, inf)
    integral_halfline: float
    value_at_zero: float
    smoothness: int
    envelope: Callable[[Array], Array]  # non-increasing majorant of |f| on [0, inf)
    sup_norm: float
    cosine_transform_closed_form: Optional[Callable[[Array], Array]] = None
    hankel_closed_form: Optional[Callable[[float, Array, Array], Array]] = None
    mellin_closed_form: Optional[Callable[[complex], complex]] = None
    algebraic_tail: bool = False
    square: Optional["TestFunction"] = None  # f**2 with its own closed forms

    def __call__(self, x):
        return self.profile(np.abs(np.asarray(x, dtype=float)))

    eval = __call__

    @property
    def integral_fullline(self) -> float:
        return 2.0 * self.integral_halfline

    def radius(self, level: float) -> float:
        """Radius beyond which |f| <= level."""
        return decay_radius(self.envelope, level)

    @property
    def support_radius(self) -> float:
        return self.radius(1e-6)

    def __repr__(self):
        return f"TestFunction({self.id!r})"


def _gaussian() -> TestFunction:
    return TestFunction(
        id="gaussian",
        profile=lambda u: np.exp(-u * u),
        integral_halfline=math.sqrt(math.pi) / 2,
        value_at_zero=1.0,
        smoothness=99,
        envelope=lambda u: np.exp(-u * u),
        sup_norm=1.0,
        cosine_transform_closed_form=lambda x: 0.5 * math.sqrt(math.pi) * np.exp(-0.25 * np.square(x)),
        # Weber's second exponential integral, written with the scaled I_nu
        hankel_closed_form=lambda nu, s, t: 0.5
        * special.ive(nu, 0.5 * s * t)
        * np.exp(-0.25 * np.square(s - t)),
        mellin_closed_form=lambda s: 0.5 * special.gamma(s / 2),
    )


def _ik_product(nu, s, t):
    """Scaled pieces of I_nu(b) K_nu(a) with a = max(s, t), b = min(s, t)."""
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    a, b = np.maximum(s, t), np.minimum(s, t)
    return a, b, np.exp(b - a)


def _cauchy_hankel(nu, s, t):
    # int_0^inf u/(1+u^2) J_nu(su) J_nu(tu) du = I_nu(b) K_nu(a)
    a, b, scale = _ik_product(nu, s, t)
    return special.ive(nu, b) * special.kve(nu, a) * scale


def _cauchy_sq_hankel(nu, s, t):
    # minus half the derivative of the formula above in the pole position
    a, b, scale = _ik_product(nu, s, t)
    i_b, k_a = special.ive(nu, b), special.kve(nu, a)
    di_b = 0.5 * (special.ive(nu - 1, b) + special.ive(nu + 1, b))
    dk_a = -0.5 * (special.kve(nu - 1, a) + special.kve(nu + 1, a))
    return -0.5 * (b * di_b * k_a + a * i_b * dk_a) * scale


def _cauchy() -> TestFunction:
    sq = TestFunction(
        id="cauchy_sq",
        profile=lambda u: 1.0 / (1.0 + u * u) ** 2,
        integral_halfline=math.pi / 4,
        value_at_zero=1.0,
        smoothness=99,
        envelope=lambda u: 1.0 / (1.0 + u * u) ** 2,
        sup_norm=1.0,
        cosine_transform_closed_form=lambda x: 0.25 * math.pi * (1.0 + np.abs(x)) * np.exp(-np.abs(x)),
        hankel_closed_form=_cauchy_sq_hankel,
        algebraic_tail=True,
    )
    return TestFunction(
        id="cauchy",
        profile=lambda u: 1.0 / (1.0 + u * u),
        integral_halfline=math.pi / 2,
        value_at_zero=1.0,
        smoothness=99,
        envelope=lambda u: 1.0 / (1.0 + u * u),
        sup_norm=1.0,
        cosine_transform_closed_form=lambda x: 0.5 * math.pi * np.exp(-np.abs(x)),
        hankel_closed_form=_cauchy_hankel,
        mellin_closed_form=lambda s: 0.5 * np.pi / np.sin(0.5 * np.pi * s),
        algebraic_tail=True,
        square=sq,
    )


def _bump_profile(radius: float):
    def f(u):
        t = np.asarray(u, dtype=float) / radius
        inside = np.abs(t) < 1.0
        out = np.zeros_like(t)
        ti = t[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
        return out

    return f


@lru_cache(maxsize=None)
def _bump_integral(radius: float) -> float:
    f = _bump_profile(radius)
    val, _ = integrate.quad(lambda u: float(f(np.array(u))), 0.0, radius, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def bump(radius: float = 2.0) -> TestFunction:
    """Smooth compactly supported bump exp(1 - 1/(1 - (x/R)^2)) on |x| < R."""
    prof = _bump_profile(radius)
    return TestFunction(
        id="bump",
        profile=prof,
        integral_halfline=_bump_integral(radius),
        value_at_zero=1.0,
        smoothness=99,
        envelope=prof,
        sup_norm=1.0,
    )


def zero() -> TestFunction:
    """The null statistic f = 0."""
    nil = lambda u: np.zeros_like(np.asarray(u, dtype=float))
    return TestFunction(
        id="zero",
        profile=nil,
        integral_halfline=0.0,
        value_at_zero=0.0,
        smoothness=99,
        envelope=nil,
        sup_norm=0.0,
        cosine_transform_closed_form=nil,
        hankel_closed_form=lambda nu, s, t: np.zeros(np.broadcast(s, t).shape),
    )


def exponential() -> TestFunction:
    """exp(-|x|). Kept out of the catalog: its even extension has a corner at 0."""
    return TestFunction(
        id="exponential",
        profile=lambda u: np.exp(-u),
        integral_halfline=1.0,
        value_at_zero=1.0,
        smoothness=0,
        envelope=lambda u: np.exp(-u),
        sup_norm=1.0,
        cosine_transform_closed_form=lambda x: 1.0 / (1.0 + np.square(x)),
        mellin_closed_form=lambda s: special.gamma(s),
    )


_REGISTRY: dict[str, TestFunction] = {}


def register(f: TestFunction) -> None:
    _REGISTRY[f.id] = f


for _f in (_gaussian(), _cauchy(), bump(), zero()):
    register(_f)


def catalog() -> list[TestFunction]:
    """The default test functions (the null function excluded)."""
    return [_REGISTRY[name] for name in ("gaussian", "cauchy", "bump")]


def get(name: str) -> TestFunction:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; known: {sorted(_REGISTRY)}") from None


@dataclass(frozen=True)
class Symbol:
    """sigma(x) = exp(i k f(x)) - 1."""

    f: TestFunction
    k: float

    def __call__(self, x):
        return np.expm1(1j * self.k * self.f(x))

    eval = __call__

    def conj(self) -> "Symbol":
        return Symbol(self.f, -self.k)


def make_symbol(f: TestFunction, k: float) -> Symbol:
    return Symbol(f, float(k))


def symbol_power(sigma: Symbol, n: int) -> Callable[[Array], Array]:
    """Pointwise x -> sigma(x)**n."""
    if n < 1:
        raise ValueError("power must be >= 1")
    return lambda x: sigma(x) ** n


def _nil(u):
    return np.zeros_like(np.asarray(u, dtype=float))


Lead = tuple  # (coefficient, TestFunction with closed-form transforms)


@dataclass(frozen=True)
class Profile:
    """Even function on [0, inf) split as sum_j c_j g_j(u) + rest(u).

    Each leading term g_j is a test function whose cosine and Hankel
    transforms are known in closed form. ``envelope`` is a non-increasing
    majorant of |rest| and decides where numerical integration of ``rest``
    may stop.
    """

    rest: Callable[[Array], Array]
    envelope: Callable[[Array], Array]
    leads: tuple = ()
    is_real: bool = True
    label: str = ""

    def __call__(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        val = self.rest(u)
        for c, g in self.leads:
            val = val + c * g.profile(u)
        return val

    def radius(self, tol: float) -> float:
        """Radius beyond which |rest| <= tol."""
        return decay_radius(self.envelope, tol)

    def full_envelope(self, u):
        env = self.envelope(u)
        for c, g in self.leads:
            env = env + abs(c) * g.envelope(u)
        return env

    def __mul__(self, other: "Profile") -> "Profile":
        return Profile(
            rest=lambda u: self(u) * other(u),
            envelope=lambda u: self.full_envelope(u) * other.full_envelope(u),
            is_real=self.is_real and other.is_real,
            label=f"({self.label})*({other.label})",
        )

    def __add__(self, other: "Profile") -> "Profile":
        return Profile(
            rest=lambda u: self.rest(u) + other.rest(u),
            envelope=lambda u: self.envelope(u) + other.envelope(u),
            leads=self.leads + other.leads,
            is_real=self.is_real and other.is_real,
            label=f"{self.label}+{other.label}",
        )

    def scaled(self, c: complex) -> "Profile":
        return Profile(
            rest=lambda u: c * self.rest(u),
            envelope=lambda u: abs(c) * self.envelope(u),
            leads=tuple((c * a, g) for a, g in self.leads),
            is_real=self.is_real and complex(c).imag == 0,
            label=f"{c}*{self.label}",
        )

    def conj(self) -> "Profile":
        return Profile(
            rest=lambda u: np.conj(self.rest(u)),
            envelope=self.envelope,
            leads=tuple((np.conj(a), g) for a, g in self.leads),
            is_real=self.is_real,
            label=f"conj({self.label})",
        )


def zero_profile() -> Profile:
    return Profile(rest=_nil, envelope=_nil, label="0")


def function_profile(f: TestFunction) -> Profile:
    """Profile of a real test function; algebraic tails are carried in closed form."""
    if f.algebraic_tail and f.cosine_transform_closed_form is not None:
        return Profile(rest=_nil, envelope=_nil, leads=((1.0, f),), label=f.id)
    return Profile(rest=f.profile, envelope=f.envelope, label=f.id)


def square_profile(f: TestFunction) -> Profile:
    """Profile of f**2."""
    if f.square is not None:
        return function_profile(f.square)
    return Profile(
        rest=lambda u: f.profile(u) ** 2,
        envelope=lambda u: f.envelope(u) ** 2,
        label=f"{f.id}^2",
    )


def symbol_profile(sigma: Symbol) -> Profile:
    """Profile of exp(ikf) - 1.

    For algebraic tails the Taylor terms ikf and -(kf)^2/2 are split off
    (the second only when f**2 has closed forms), leaving a rest bounded by
    |kf|^3/6 or (kf)^2/2. Otherwise |sigma| <= |k f|.
    """
    f, k = sigma.f, sigma.k
    label = f"sigma[{f.id},k={k:g}]"
    if k == 0:
        return Profile(rest=_nil, envelope=_nil, label=label)
    if f.algebraic_tail and f.cosine_transform_closed_form is not None:
        if f.square is not None:
            rest = lambda u: _expm1_tail(1j * k * f.profile(u), 3)
            env = lambda u: np.abs(k * f.envelope(u)) ** 3 / 6.0
            leads = ((1j * k, f), (-0.5 * k * k, f.square))
        else:
            rest = lambda u: _expm1_tail(1j * k * f.profile(u), 2)
            env = lambda u: 0.5 * (k * f.envelope(u)) ** 2
            leads = ((1j * k, f),)
        return Profile(rest=rest, envelope=env, leads=leads, is_real=False, label=label)
    return Profile(
        rest=lambda u: np.expm1(1j * k * f.profile(u)),
        envelope=lambda u: abs(k) * f.envelope(u),
        is_real=False,
        label=label,
    )


def _expm1_tail(z, order: int):
    """exp(z) - sum_{j<order} z^j/j!, accurate for small |z|."""
    z = np.asarray(z)
    out = np.empty_like(z, dtype=complex)
    small = np.abs(z) < 0.1
    zs = z[small]
    # series from the first retained term; 12 terms reach double precision at |z| < 0.1
    term = zs**order / math.factorial(order)
    acc = term.copy()
    for j in range(order + 1, order + 13):
        term = term * zs / j
        acc = acc + term
    out[small] = acc
    zl = z[~small]
    direct = np.expm1(zl)
    for j in range(1, order):
        direct = direct - zl**j / math.factorial(j)
    out[~small] = direct
    return out


def power_profile(sigma: Symbol, n: int) -> Profile:
    """Profile of sigma**n (no closed-form part; |sigma|^n <= |k f|^n)."""
    if n < 1:
        raise ValueError("power must be >= 1")
    if n == 1:
        return symbol_profile(sigma)
    f, k = sigma.f, sigma.k
    return Profile(
        rest=lambda u: np.expm1(1j * k * f.profile(u)) ** n,
        envelope=lambda u: (abs(k) * f.envelope(u)) ** n,
        is_real=k == 0,
        label=f"sigma[{f.id},k={k:g}]^{n}",
    )


def callable_profile(fn: Callable[[Array], Array], radius: float, label: str = "callable") -> Profile:
    """Wrap a bare pointwise map that is negligible beyond ``radius``."""
    return Profile(
        rest=lambda u: np.asarray(fn(u), dtype=complex),
        envelope=lambda u: np.where(np.asarray(u) < radius, np.inf, 0.0),
        is_real=False,
        label=label,
    )


def as_profile(obj, radius: Optional[float] = None) -> Profile:
    """Coerce a TestFunction, Symbol, Profile or (with ``radius``) a callable."""
    if isinstance(obj, Profile):
        return obj
    if isinstance(obj, Symbol):
        return symbol_profile(obj)
    if isinstance(obj, TestFunction):
        return function_profile(obj)
    if callable(obj):
        if radius is None:
            raise TypeError("a bare callable needs an explicit truncation radius")
        return callable_profile(obj, radius)
    raise TypeError(f"cannot build a profile from {type(obj).__name__}")

"""Kernels of the fractional two-point problem.

For ``0 < alpha <= 1`` and ``mu >= 0`` the problem

    D^alpha D^alpha y(t) - mu^2 y(t) = 0,   y(0) = a,   y(1) = b

(with the composed Caputo operator) is solved by ``y = a C(t) + b S(t)``:

    C(t) = [E(mu) E(-mu t^a) - E(-mu) E(mu t^a)] / (2 mu E2(mu^2))
    S(t) = t^a E2(mu^2 t^2a) / E2(mu^2)

with ``E = E_{alpha,1}`` and ``E2 = E_{2 alpha, alpha+1}``. For ``mu = 0`` the
limits ``1 - t^a`` and ``t^a`` are used.

``E(mu t^alpha)`` grows like ``exp(mu^(1/alpha) t)``, so everything
involving positive arguments is carried in exponentially scaled form and
the ratio is assembled as ``exp(W (t - 1))`` times bounded quantities,
``W = mu^(1/alpha)``. Nothing overflows for any ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mittag_leffler import EXTENDED_ASYMPTOTIC_TERMS, ml_eval_many

__all__ = [
    "DegenerateSystem",
    "DomainError",
    "KernelParams",
    "TwoPointSolution",
    "general_coefficients",
    "general_solution",
    "kernel_C",
    "kernel_S",
    "solve_two_point",
]

# E_{alpha,1} on the negative axis is O(1) and only needed to absolute accuracy
_REL_TOL = 1e-13
_NEG_ABS_TOL = 1e-15
# below this mu^(1/alpha), C uses the even/odd split instead of E(mu) - E(-mu)
SMALL_MU_EXPONENT = 1.0


class DomainError(ValueError):
    """Kernel argument outside [0, 1]."""


class DegenerateSystem(ArithmeticError):
    """The 2x2 system for the general-solution coefficients is singular."""


@dataclass(frozen=True)
class KernelParams:
    alpha: float
    mu: float

    def __post_init__(self):
        a, m = self.alpha, self.mu
        if not (math.isfinite(a) and 0.0 < a <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {a}")
        if not (math.isfinite(m) and m >= 0.0):
            raise ValueError(f"mu must be finite and >= 0, got {m}")

    @property
    def exponent(self):
        """W = mu^(1/alpha), the growth rate of E(mu t^alpha) in t."""
        return self.mu ** (1.0 / self.alpha)


def _coerce(params):
    if isinstance(params, KernelParams):
        return params
    alpha, mu = params
    return KernelParams(float(alpha), float(mu))


def _as_t(t):
    arr = np.asarray(t, dtype=float)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        bad = arr[~((arr >= 0.0) & (arr <= 1.0))].ravel()[0]
        raise DomainError(f"t must lie in [0, 1], got {bad}")
    return arr


def _neg(alpha, z):
    return ml_eval_many(
        (alpha, 1.0), z, _REL_TOL, _NEG_ABS_TOL, max_terms=EXTENDED_ASYMPTOTIC_TERMS
    )[0]


def _pos_scaled(alpha, beta, z):
    # E(z) exp(-z^(1/alpha)); the caller supplies the matching exponent
    return ml_eval_many((alpha, beta), z, _REL_TOL, 0.0, scaled=True)[0]


@dataclass(frozen=True)
class _Endpoints:
    """Values at t = 1 in scaled form (all multiplied by exp(-W))."""

    w: float
    ep_s: float  # E(mu) e^-W
    em: float  # E(-mu)
    e2_s: float  # E2(mu^2) e^-W


def _endpoints(p):
    w = p.exponent
    ep_s = float(_pos_scaled(p.alpha, 1.0, np.array([p.mu]))[0])
    em = float(_neg(p.alpha, np.array([-p.mu]))[0])
    e2_s = float(_pos_scaled(2.0 * p.alpha, p.alpha + 1.0, np.array([p.mu * p.mu]))[0])
    return _Endpoints(w, ep_s, em, e2_s)


def _result(values, t):
    return float(values) if np.ndim(t) == 0 else values


def _kernel_S(p, t, ends=None):
    ta = t**p.alpha
    if p.mu == 0.0:
        return ta
    ends = ends or _endpoints(p)
    x = p.mu * ta
    e2 = _pos_scaled(2.0 * p.alpha, p.alpha + 1.0, x * x)
    return ta * e2 * np.exp(ends.w * (t - 1.0)) / ends.e2_s


def _kernel_C_small(p, ta):
    # even/odd split of E: no cancellation as mu -> 0, exact 1 at t = 0
    x = p.mu * ta
    m2 = np.array([p.mu * p.mu])
    even = ml_eval_many((2.0 * p.alpha, 1.0), x * x, _REL_TOL, 0.0)[0]
    even_mu = float(ml_eval_many((2.0 * p.alpha, 1.0), m2, _REL_TOL, 0.0)[0][0])
    odd = ml_eval_many((2.0 * p.alpha, p.alpha + 1.0), x * x, _REL_TOL, 0.0)[0]
    odd_mu = float(ml_eval_many((2.0 * p.alpha, p.alpha + 1.0), m2, _REL_TOL, 0.0)[0][0])
    return even - ta * even_mu * odd / odd_mu


def _kernel_C(p, t, ends=None):
    ta = t**p.alpha
    if p.mu == 0.0:
        return 1.0 - ta
    if p.exponent <= SMALL_MU_EXPONENT:
        return _kernel_C_small(p, ta)
    ends = ends or _endpoints(p)
    x = p.mu * ta
    e_neg = _neg(p.alpha, -x)
    e_pos = _pos_scaled(p.alpha, 1.0, x)
    num = ends.ep_s * e_neg - ends.em * e_pos * np.exp(ends.w * (t - 1.0))
    return num / (2.0 * p.mu * ends.e2_s)


def kernel_C(params, t):
    """C(mu t): equals 1 at t = 0 and 0 at t = 1. Vectorised over ``t``."""
    p = _coerce(params)
    arr = _as_t(t)
    return _result(_kernel_C(p, arr), t)


def kernel_S(params, t):
    """S(mu t): equals 0 at t = 0 and 1 at t = 1. Vectorised over ``t``."""
    p = _coerce(params)
    arr = _as_t(t)
    return _result(_kernel_S(p, arr), t)


def _coefficients_scaled(p, a, b):
    """(D1, D2 e^W) with the denominator E(mu) - E(-mu) formed directly."""
    if p.mu == 0.0:
        raise DegenerateSystem("E(mu) = E(-mu) at mu = 0; use the limit kernels")
    ends = _endpoints(p)
    decay = math.exp(-ends.w)
    den_s = ends.ep_s - ends.em * decay
    if not den_s > 0.0:
        raise DegenerateSystem(f"E(mu) - E(-mu) is not positive for mu = {p.mu}")
    d1 = (a * ends.ep_s - b * decay) / den_s
    d2_s = (b - a * ends.em) / den_s
    return d1, d2_s, ends


def general_coefficients(params, a, b):
    """Coefficients ``(D1, D2)`` of ``y = D1 E(-mu t^a) + D2 E(mu t^a)``.

    Obtained by eliminating between ``y(0) = a`` and ``y(1) = b``::

        D2 = (b - a E(-mu)) / (E(mu) - E(-mu))
        D1 = (a E(mu) - b) / (E(mu) - E(-mu))

    Requires ``mu > 0``. ``D2`` underflows to zero once ``mu^(1/alpha)``
    exceeds ~745; :func:`general_solution` stays accurate regardless.
    """
    p = _coerce(params)
    d1, d2_s, ends = _coefficients_scaled(p, float(a), float(b))
    return d1, d2_s * math.exp(-ends.w)


def general_solution(params, a, b, t):
    """Evaluate ``D1 E(-mu t^a) + D2 E(mu t^a)`` without forming E(mu t^a)."""
    p = _coerce(params)
    arr = _as_t(t)
    d1, d2_s, ends = _coefficients_scaled(p, float(a), float(b))
    x = p.mu * arr**p.alpha
    y = d1 * _neg(p.alpha, -x) + d2_s * _pos_scaled(p.alpha, 1.0, x) * np.exp(ends.w * (arr - 1.0))
    return _result(y, t)


@dataclass(frozen=True)
class TwoPointSolution:
    """``y(t) = a C(mu t) + b S(mu t)``; call it with scalar or array ``t``."""

    params: KernelParams
    a: float
    b: float

    def __call__(self, t):
        arr = _as_t(t)
        p = self.params
        ends = None if p.mu == 0.0 else _endpoints(p)
        y = np.zeros_like(arr)
        if self.a != 0.0:
            y = y + self.a * _kernel_C(p, arr, ends)
        if self.b != 0.0:
            y = y + self.b * _kernel_S(p, arr, ends)
        return _result(y, t)

    def coefficients(self):
        return general_coefficients(self.params, self.a, self.b)


def solve_two_point(params, a, b):
    """Solution of the two-point problem with ``y(0) = a`` and ``y(1) = b``."""
    return TwoPointSolution(_coerce(params), float(a), float(b))

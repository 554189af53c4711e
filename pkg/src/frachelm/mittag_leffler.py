"""Two-parameter Mittag-Leffler function on the real axis.

.. math::

    E_{\\alpha,\\beta}(z) = \\sum_{k=0}^\\infty \\frac{z^k}{\\Gamma(\\alpha k + \\beta)}

Two expansions are used and the choice is driven by the exponential scale
``w = |z|**(1/alpha)``:

* the power series for ``w <= SERIES_MAX_EXPONENT``. Negative arguments
  cancel badly, so the sum escalates from compensated double precision to
  double-double terms and finally to mpmath at whatever precision the
  measured cancellation requires;
* the large-argument expansion (exponential term plus algebraic tail)
  for ``w >= ASYMPTOTIC_MIN_EXPONENT`` whenever its error estimate meets the
  tolerance.

The two windows overlap on ``[25, 30]``; ``regime_overlap`` measures the
disagreement there.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np
from scipy.special import rgamma

from . import _core

__all__ = [
    "ASYMPTOTIC_MIN_EXPONENT",
    "SERIES_MAX_EXPONENT",
    "InvalidParams",
    "MLParams",
    "MLResult",
    "MittagLefflerError",
    "NonConvergent",
    "OutOfRegime",
    "Regime",
    "ml_asymptotic",
    "ml_eval",
    "ml_eval_many",
    "ml_eval_scaled",
    "ml_series",
    "regime_overlap",
]

SERIES_MAX_EXPONENT = 30.0
ASYMPTOTIC_MIN_EXPONENT = 25.0
MAX_ASYMPTOTIC_TERMS = 20
# cap used for kernel evaluations at absolute tolerance, and before costly series
EXTENDED_ASYMPTOTIC_TERMS = 60
# beyond this w = |z|^(1/alpha) the mp series needs more than ~60 digits
COSTLY_SERIES_EXPONENT = 100.0
CANCELLATION_LIMIT = 1e6
MAX_DIGITS = 3000
DEFAULT_MAX_TERMS = 200_000

_EPS = 2.0**-52
_DD_EPS = 2.0**-104


class MittagLefflerError(ArithmeticError):
    """Base class for evaluation failures."""


class InvalidParams(MittagLefflerError, ValueError):
    pass


class NonConvergent(MittagLefflerError):
    """Neither expansion reached the tolerance; ``best`` holds what we have."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class OutOfRegime(MittagLefflerError):
    """The asymptotic expansion cannot deliver the requested accuracy here."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class Regime(str, enum.Enum):
    SERIES = "series"
    ASYMPTOTIC_POSITIVE = "asymptotic_positive"
    ASYMPTOTIC_NEGATIVE = "asymptotic_negative"


@dataclass(frozen=True)
class MLParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParams(f"parameters must be finite, got alpha={a}, beta={b}")
        if a <= 0.0 or a > 2.0:
            raise InvalidParams(f"alpha must lie in (0, 2], got {a}")
        if b <= 0.0:
            raise InvalidParams(f"beta must be positive, got {b}")


@dataclass(frozen=True)
class MLResult:
    """An evaluated value with its error bookkeeping.

    The represented number is ``value * exp(log_scale)``; ``log_scale`` is
    zero except for results of :func:`ml_eval_scaled`. ``est_abs_error`` is on
    the same scale as ``value``. ``cancellation`` is the ratio of the largest
    partial sum to the final sum (1 when nothing cancels).
    """

    value: float
    est_abs_error: float
    regime: Regime
    cancellation: float = 1.0
    terms: int = 0
    precision: str = "double"
    log_scale: float = 0.0


def _coerce(params):
    if isinstance(params, MLParams):
        return params
    alpha, beta = params
    return MLParams(float(alpha), float(beta))


def _check_rel_tol(rel_tol):
    if not 1e-14 <= rel_tol <= 1e-6:
        raise ValueError(f"rel_tol must lie in [1e-14, 1e-6], got {rel_tol}")


# -- power series --------------------------------------------------------------


def ml_series(params, z, rel_tol=1e-14, max_terms=DEFAULT_MAX_TERMS, abs_tol=0.0):
    """Direct summation of the defining power series.

    Terms are summed with Neumaier compensation. When the cancellation
    severity exceeds ``CANCELLATION_LIMIT`` (or the rounding estimate misses
    the tolerance) the sum is redone in double-double, then in mpmath with
    enough digits to absorb the measured cancellation.
    """
    p = _coerce(params)
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    z = float(z)
    if z == 0.0:
        return MLResult(float(rgamma(p.beta)), 0.0, Regime.SERIES, terms=1)

    if z > 0.0 and abs(z) ** (1.0 / p.alpha) > 700.0:
        raise NonConvergent(f"E_{{{p.alpha},{p.beta}}}({z}) overflows double precision")

    value, max_partial, abs_sum, neglected, n, converged = _core.series_double(
        p.alpha, p.beta, z, rel_tol, abs_tol, max_terms
    )
    if z > 0.0 and not converged:
        raise NonConvergent(
            f"series for E_{{{p.alpha},{p.beta}}}({z}) did not converge in {max_terms} terms",
            best=MLResult(value, math.inf, Regime.SERIES, terms=n),
        )
    result = MLResult(value, math.inf, Regime.SERIES, terms=n)
    finite = converged and math.isfinite(abs_sum)
    if finite:
        severity = _severity(max_partial, value)
        err = neglected + 8.0 * _EPS * abs_sum
        result = MLResult(value, err, Regime.SERIES, severity, n, "double")
        if _meets(result, rel_tol, abs_tol) and severity <= CANCELLATION_LIMIT:
            return result

        value, max_partial, abs_sum, neglected, n, converged, max_expo = _core.series_dd(
            p.alpha, p.beta, z, rel_tol, abs_tol, max_terms
        )
        if converged:
            err = neglected + (2.0 * max_expo + n + 8.0) * _DD_EPS * abs_sum
            result = MLResult(value, err, Regime.SERIES, _severity(max_partial, value), n, "double-double")
            if _meets(result, rel_tol, abs_tol):
                return result

    return _series_mp(p, z, rel_tol, abs_tol, max_terms, result)


def _severity(max_partial, value):
    if value == 0.0:
        return math.inf
    return max(1.0, max_partial / abs(value))


def _meets(result, rel_tol, abs_tol):
    return result.est_abs_error <= max(rel_tol * abs(result.value), abs_tol)


def _series_mp(p, z, rel_tol, abs_tol, max_terms, best):
    # digits: resolve the largest term, ~E(|z|) ~ exp(|z|^(1/alpha)), down to the target
    w = abs(z) ** (1.0 / p.alpha)
    log10_peak = max(w, 0.0) / math.log(10.0)
    if math.isfinite(best.value) and best.value != 0.0:
        log10_target = math.log10(max(rel_tol * abs(best.value), abs_tol, 1e-300))
    else:
        log10_target = math.log10(max(rel_tol / max(1.0, abs(z)) * 1e-2, abs_tol, 1e-300))
    digits = int(math.ceil(log10_peak - log10_target)) + 10
    while digits <= MAX_DIGITS:
        result = _series_mp_once(p, z, digits, rel_tol, abs_tol, max_terms)
        if result is not None and _meets(result, rel_tol, abs_tol):
            return result
        nxt = 2 * digits
        if result is not None:
            best = result
            # the seed value may come from a cancelled double sum; re-aim from this run
            if math.isfinite(result.value) and result.value != 0.0:
                target = math.log10(max(rel_tol * abs(result.value), abs_tol, 1e-300))
                nxt = max(nxt, int(math.ceil(log10_peak - target)) + 10)
        digits = nxt
    raise NonConvergent(
        f"series for E_{{{p.alpha},{p.beta}}}({z}) needs more than {MAX_DIGITS} digits",
        best=best,
    )


def _series_mp_once(p, z, digits, rel_tol, abs_tol, max_terms):
    with mpmath.workdps(digits):
        mz = mpmath.mpf(z)
        alpha = mpmath.mpf(p.alpha)
        beta = mpmath.mpf(p.beta)
        integer_alpha = float(p.alpha).is_integer()
        s = mpmath.mpf(0)
        abs_sum = mpmath.mpf(0)
        max_partial = mpmath.mpf(0)
        prev = mpmath.inf
        prev_small = False
        term = mpmath.rgamma(beta)
        for k in range(max_terms):
            if k > 0:
                if integer_alpha:
                    # Gamma(a k + b) = Gamma(a (k-1) + b) * prod of a consecutive factors
                    x = alpha * (k - 1) + beta
                    for j in range(int(p.alpha)):
                        term /= x + j
                    term *= mz
                else:
                    term = mz**k * mpmath.rgamma(alpha * k + beta)
            a = abs(term)
            bound = max(rel_tol * abs(s), abs_tol)
            small = a <= bound and a <= prev
            if small and prev_small:
                value = float(s)
                err = float(a + abs_sum * mpmath.mpf(10) ** (-digits) * (k + 1))
                return MLResult(
                    value,
                    err,
                    Regime.SERIES,
                    _severity(float(max_partial), value),
                    k,
                    f"mp{digits}",
                )
            s += term
            abs_sum += a
            if abs(s) > max_partial:
                max_partial = abs(s)
            prev_small = small
            prev = a
    return None


# -- large-argument expansion --------------------------------------------------


def _sector_terms(alpha, arg):
    """Exponential saddle contributions ``(phase, weight)`` for ``arg z``.

    A branch ``m`` contributes when ``|arg z + 2 pi m| <= alpha pi``; exactly
    on the boundary it carries half weight (alpha = 1 on the negative axis,
    alpha = 2 on the positive axis).
    """
    terms = []
    limit = alpha * math.pi
    mmax = int(math.ceil(alpha / 2.0)) + 1
    for m in range(-mmax, mmax + 1):
        theta = arg + 2.0 * math.pi * m
        if abs(theta) <= limit * (1.0 + 1e-13):
            weight = 0.5 if abs(abs(theta) - limit) <= 1e-12 * limit else 1.0
            terms.append((theta / alpha, weight))
    return tuple(terms)


@functools.lru_cache(maxsize=256)
def _reciprocal_gammas(alpha, beta, count):
    g = rgamma(beta - alpha * np.arange(1, count + 1))
    g.flags.writeable = False
    return g


def _asymptotic_batch(alpha, beta, z, rel_tol, abs_tol, scaled, max_terms, p=None):
    """Vectorised large-argument expansion for nonzero real ``z``.

    Returns ``(value, err, used, log_scale)`` arrays. ``p=None`` picks, per
    point, the smallest term count meeting the tolerance, or the one with the
    smallest error estimate if none does.
    """
    z = np.asarray(z, dtype=float)
    r = np.abs(z)
    w = r ** (1.0 / alpha)
    positive = z > 0.0
    pmax = max_terms if p is None else p
    count = pmax + 2  # two spare terms so the estimate can step over a pole
    g = _reciprocal_gammas(alpha, beta, count)
    k = np.arange(1, count + 1)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        mag = np.exp(-np.log(r)[:, None] * k[None, :])
        sign = np.where(positive[:, None], 1.0, (-1.0) ** k[None, :])
        terms = -sign * mag * g[None, :]
    alg_scale = np.where(positive & scaled, np.exp(-np.where(positive, w, 0.0)), 1.0)

    expo = np.zeros_like(z)
    shift = np.where(scaled, w, 0.0)
    for phi, weight in _sector_terms(alpha, 0.0):
        sin_phi = 0.0 if abs(abs(phi) - math.pi) < 1e-15 else math.sin(phi)
        with np.errstate(over="ignore"):
            contrib = (
                weight
                * w ** (1.0 - beta)
                * np.exp(w * math.cos(phi) - shift)
                * np.cos((1.0 - beta) * phi + w * sin_phi)
            )
        expo = expo + np.where(positive, contrib, 0.0)
    expo /= alpha

    omitted = np.zeros_like(z)
    for phi, weight in _sector_terms(alpha, math.pi):
        with np.errstate(over="ignore"):
            omitted = omitted + weight * w ** (1.0 - beta) * np.exp(w * math.cos(phi))
    omitted = np.where(positive, 0.0, omitted / alpha)

    partial = np.cumsum(terms[:, :pmax], axis=1)
    values = expo[:, None] + alg_scale[:, None] * partial
    nxt = np.maximum(np.abs(terms[:, 1 : pmax + 1]), np.abs(terms[:, 2 : pmax + 2]))
    errs = alg_scale[:, None] * (nxt + omitted[:, None])
    errs = np.where(np.isfinite(errs), errs, np.inf)

    rows = np.arange(z.size)
    if p is not None:
        idx = np.full(z.size, p - 1)
    else:
        ok = errs <= np.maximum(rel_tol * np.abs(values), abs_tol)
        first_ok = np.argmax(ok, axis=1)
        idx = np.where(ok.any(axis=1), first_ok, np.argmin(errs, axis=1))
    value = values[rows, idx]
    err = errs[rows, idx]
    log_scale = np.where(positive & scaled, w, 0.0)
    return value, err, idx + 1, log_scale


def ml_asymptotic(
    params, z, p=None, rel_tol=1e-6, abs_tol=0.0, *, scaled=False, max_terms=MAX_ASYMPTOTIC_TERMS
):
    """Large-|z| expansion with ``p`` algebraic correction terms.

    For ``z > 0``::

        E(z) ~ (1/alpha) z^((1-beta)/alpha) exp(z^(1/alpha)) - sum_{k<=p} z^-k / Gamma(beta - alpha k)

    (at alpha = 2 the mirror branch ``exp(-sqrt z)`` sits on the sector
    boundary and is added with half weight). For ``z < 0`` only the algebraic
    sum is kept; any exponential branch that reaches the negative axis
    (alpha >= 1) is counted as error, so e.g. alpha = 2 raises
    :class:`OutOfRegime`.

    ``p=None`` chooses p adaptively: the smallest count whose next-term
    estimate meets the tolerance, else the count with the smallest estimate,
    never more than ``max_terms``. With ``scaled=True`` and ``z > 0`` the
    result carries ``log_scale = z^(1/alpha)``.
    """
    prm = _coerce(params)
    z = float(z)
    if z == 0.0:
        raise OutOfRegime("the asymptotic expansion does not apply at z = 0")
    if p is not None and p < 1:
        raise ValueError("p must be >= 1")
    alpha, beta = prm.alpha, prm.beta
    if z > 0.0 and not scaled and z ** (1.0 / alpha) > 709.0:
        raise OutOfRegime(f"E_{{{alpha},{beta}}}({z}) overflows; use ml_eval_scaled")
    value, err, used, log_scale = _asymptotic_batch(
        alpha, beta, np.array([z]), rel_tol, abs_tol, scaled, max_terms, p
    )
    regime = Regime.ASYMPTOTIC_POSITIVE if z > 0.0 else Regime.ASYMPTOTIC_NEGATIVE
    result = MLResult(float(value[0]), float(err[0]), regime, terms=int(used[0]), log_scale=float(log_scale[0]))
    if not _meets(result, rel_tol, abs_tol):
        raise OutOfRegime(
            f"asymptotic expansion of E_{{{alpha},{beta}}}({z}) with p={result.terms} has "
            f"error ~{result.est_abs_error:.3g}, above tolerance",
            best=result,
        )
    return result


# -- dispatch ------------------------------------------------------------------


def _evaluate(alpha, beta, z, rel_tol, abs_tol, scaled=False, max_terms=MAX_ASYMPTOTIC_TERMS):
    p = MLParams(alpha, beta)
    if z == 0.0:
        return MLResult(float(rgamma(beta)), 0.0, Regime.SERIES, terms=1)
    w = abs(z) ** (1.0 / alpha)
    if w >= ASYMPTOTIC_MIN_EXPONENT:
        try:
            return ml_asymptotic(p, z, None, rel_tol, abs_tol, scaled=scaled, max_terms=max_terms)
        except OutOfRegime:
            pass
    if w >= COSTLY_SERIES_EXPONENT and max_terms < EXTENDED_ASYMPTOTIC_TERMS:
        # the series would need hundreds of digits; more tail terms are far cheaper
        try:
            return ml_asymptotic(p, z, None, rel_tol, abs_tol, scaled=scaled, max_terms=EXTENDED_ASYMPTOTIC_TERMS)
        except OutOfRegime:
            pass
    if z > 0.0 and w > 700.0:
        raise NonConvergent(f"E_{{{alpha},{beta}}}({z}) is out of range for the series")
    res = ml_series(p, z, rel_tol, DEFAULT_MAX_TERMS, abs_tol)
    if scaled and z > 0.0:
        f = math.exp(-w)
        res = replace(res, value=res.value * f, est_abs_error=res.est_abs_error * f, log_scale=w)
    return res


def ml_eval_many(params, z, rel_tol=1e-14, abs_tol=0.0, *, scaled=False, max_terms=MAX_ASYMPTOTIC_TERMS):
    """Vectorised :func:`_evaluate`: returns ``(values, errors, log_scales)``.

    Points in the asymptotic window are handled in one batch; the rest (and
    any batch point whose estimate misses the tolerance) go through the
    series path one at a time. ``scaled`` applies to positive points only.
    """
    p = _coerce(params)
    z = np.asarray(z, dtype=float)
    shape = z.shape
    z = z.ravel()
    values = np.empty_like(z)
    errs = np.empty_like(z)
    scales = np.zeros_like(z)
    with np.errstate(divide="ignore"):
        w = np.abs(z) ** (1.0 / p.alpha)
    todo = np.ones(z.size, dtype=bool)
    cand = (w >= ASYMPTOTIC_MIN_EXPONENT) & (z != 0.0)
    if not scaled:
        cand &= ~((z > 0.0) & (w > 709.0))
    if cand.any():
        v, e, _, ls = _asymptotic_batch(p.alpha, p.beta, z[cand], rel_tol, abs_tol, scaled, max_terms)
        ok = e <= np.maximum(rel_tol * np.abs(v), abs_tol)
        idx = np.flatnonzero(cand)[ok]
        values[idx], errs[idx], scales[idx] = v[ok], e[ok], ls[ok]
        todo[idx] = False
    for i in np.flatnonzero(todo):
        res = _evaluate(p.alpha, p.beta, float(z[i]), rel_tol, abs_tol, scaled, max_terms)
        values[i], errs[i], scales[i] = res.value, res.est_abs_error, res.log_scale
    return values.reshape(shape), errs.reshape(shape), scales.reshape(shape)


def ml_eval(params, z, rel_tol=1e-14):
    """E_{alpha,beta}(z) to relative accuracy ``rel_tol`` (real z)."""
    p = _coerce(params)
    _check_rel_tol(rel_tol)
    return _evaluate(p.alpha, p.beta, float(z), rel_tol, 0.0)


def ml_eval_scaled(params, z, rel_tol=1e-14):
    """``E(z) * exp(-z^(1/alpha))`` for ``z >= 0``, free of overflow.

    The exponent is reported in ``log_scale`` so that
    ``result.value * exp(result.log_scale)`` is the unscaled value.
    """
    p = _coerce(params)
    _check_rel_tol(rel_tol)
    z = float(z)
    if z < 0.0:
        raise ValueError("scaled evaluation is only defined for z >= 0")
    return _evaluate(p.alpha, p.beta, z, rel_tol, 0.0, scaled=True)


def regime_overlap(params, sign=1.0, points=6, rel_tol=1e-12):
    """Largest relative gap between series and asymptotic values in the overlap.

    On the positive axis the samples are uniform in ``w = z^(1/alpha)`` over
    ``[ASYMPTOTIC_MIN_EXPONENT, SERIES_MAX_EXPONENT]`` (the value itself would
    overflow for small alpha); on the negative axis they are uniform in
    ``|z|`` over the same interval.
    """
    p = _coerce(params)
    worst = 0.0
    for i in range(points):
        s = ASYMPTOTIC_MIN_EXPONENT + (SERIES_MAX_EXPONENT - ASYMPTOTIC_MIN_EXPONENT) * i / (points - 1)
        z = s**p.alpha if sign > 0 else -s
        ser = ml_series(p, z, rel_tol)
        asy = ml_asymptotic(p, z, None, rel_tol=rel_tol)
        worst = max(worst, abs(ser.value - asy.value) / abs(ser.value))
    return worst

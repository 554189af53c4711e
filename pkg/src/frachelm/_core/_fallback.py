"""Pure Python versions of the compiled kernels.

Same call signatures and return tuples as ``_kernels``. The double-double
series is emulated with mpmath at 34 significant digits, which is slower but
at least as accurate.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

DD_DIGITS = 34


def _small(a, s, prev, rel_tol, abs_tol):
    return a <= max(rel_tol * abs(s), abs_tol) and a <= prev


def series_double(alpha, beta, z, rel_tol, abs_tol, max_terms):
    r = abs(z)
    logr = math.log(r)
    s = 0.0
    c = 0.0
    max_partial = 0.0
    abs_sum = 0.0
    prev = math.inf
    neglected = 0.0
    prev_small = False
    converged = False
    n = 0
    for k in range(max_terms):
        x = alpha * k + beta
        if x < 170.0 and k * logr < 700.0:
            term = r**k / math.gamma(x)
        else:
            term = math.exp(k * logr - math.lgamma(x))
        if z < 0.0 and k & 1:
            term = -term
        a = abs(term)
        small = _small(a, s + c, prev, rel_tol, abs_tol)
        if small and prev_small:
            neglected = a
            converged = True
            break
        t = s + term
        if abs(s) >= a:
            c += (s - t) + term
        else:
            c += (term - t) + s
        s = t
        abs_sum += a
        n += 1
        max_partial = max(max_partial, abs(s + c))
        prev_small = small
        prev = a
    if not converged:
        neglected = prev
    return s + c, max_partial, abs_sum, neglected, n, converged


def series_dd(alpha, beta, z, rel_tol, abs_tol, max_terms):
    with mpmath.workdps(DD_DIGITS):
        mz = mpmath.mpf(z)
        ma = mpmath.mpf(alpha)
        mb = mpmath.mpf(beta)
        s = mpmath.mpf(0)
        max_partial = 0.0
        abs_sum = 0.0
        prev = math.inf
        neglected = 0.0
        max_expo = 0.0
        prev_small = False
        converged = False
        n = 0
        power = mpmath.mpf(1)
        for k in range(max_terms):
            term = power * mpmath.rgamma(ma * k + mb)
            power *= mz
            a = abs(float(term))
            if a > 0.0:
                max_expo = max(max_expo, abs(math.log(a)))
            small = _small(a, float(s), prev, rel_tol, abs_tol)
            if small and prev_small:
                neglected = a
                converged = True
                break
            s += term
            abs_sum += a
            n += 1
            max_partial = max(max_partial, abs(float(s)))
            prev_small = small
            prev = a
        if not converged:
            neglected = prev
        return float(s), max_partial, abs_sum, neglected, n, converged, max_expo


def l1_convolve(diff, weights):
    diff = np.ascontiguousarray(diff, dtype=float)
    m = diff.shape[0]
    out = np.zeros(m + 1)
    out[1:] = np.convolve(weights[:m], diff)[:m]
    return out


def modal_sum(profiles, shapes):
    profiles = np.asarray(profiles, dtype=float)
    shapes = np.asarray(shapes, dtype=float)
    nx = profiles.shape[1]
    ny = shapes.shape[1]
    s = np.zeros((nx, ny))
    c = np.zeros((nx, ny))
    for m in range(profiles.shape[0]):
        v = np.multiply.outer(profiles[m], shapes[m])
        t = s + v
        big = np.abs(s) >= np.abs(v)
        c += np.where(big, (s - t) + v, (v - t) + s)
        s = t
    return s + c

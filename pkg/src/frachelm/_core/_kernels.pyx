# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Double-double ("dd") arithmetic follows the usual error-free transformation
recipes (two_sum / two_prod with fma). The module must be built without
``-ffast-math`` and with ``-ffp-contract=off`` or the transformations break.
"""

from fractions import Fraction

import numpy as np

from libc.math cimport exp, fabs, floor, fma, ldexp, lgamma, log, pow, tgamma, INFINITY

ctypedef struct dd_t:
    double hi
    double lo

cdef dd_t LN2
LN2.hi = 0.6931471805599453
LN2.lo = 2.3190468138462996e-17

cdef dd_t HALF_LOG_2PI
HALF_LOG_2PI.hi = 0.9189385332046728
HALF_LOG_2PI.lo = -3.8782941580672414e-17

cdef enum:
    N_STIRLING = 16
    EXP_SQUARINGS = 9

cdef double STIRLING_SHIFT = 32.0

cdef double STIRLING_HI[N_STIRLING]
cdef double STIRLING_LO[N_STIRLING]


def _bernoulli(int n):
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def _init_stirling():
    for j in range(1, N_STIRLING + 1):
        c = _bernoulli(2 * j) / (2 * j * (2 * j - 1))
        hi = float(c)
        STIRLING_HI[j - 1] = hi
        STIRLING_LO[j - 1] = float(c - Fraction(hi))


_init_stirling()


cdef inline dd_t dd_make(double hi, double lo) noexcept nogil:
    cdef dd_t r
    r.hi = hi
    r.lo = lo
    return r


cdef inline dd_t quick_two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    return dd_make(s, b - (s - a))


cdef inline dd_t two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    cdef double bb = s - a
    return dd_make(s, (a - (s - bb)) + (b - bb))


cdef inline dd_t two_prod(double a, double b) noexcept nogil:
    cdef double p = a * b
    return dd_make(p, fma(a, b, -p))


cdef inline dd_t dd_add(dd_t a, dd_t b) noexcept nogil:
    cdef dd_t s = two_sum(a.hi, b.hi)
    cdef dd_t t = two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return quick_two_sum(s.hi, s.lo)


cdef inline dd_t dd_neg(dd_t a) noexcept nogil:
    return dd_make(-a.hi, -a.lo)


cdef inline dd_t dd_sub(dd_t a, dd_t b) noexcept nogil:
    return dd_add(a, dd_neg(b))


cdef inline dd_t dd_add_d(dd_t a, double b) noexcept nogil:
    cdef dd_t s = two_sum(a.hi, b)
    s.lo += a.lo
    return quick_two_sum(s.hi, s.lo)


cdef inline dd_t dd_mul(dd_t a, dd_t b) noexcept nogil:
    cdef dd_t p = two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return quick_two_sum(p.hi, p.lo)


cdef inline dd_t dd_mul_d(dd_t a, double b) noexcept nogil:
    cdef dd_t p = two_prod(a.hi, b)
    p.lo += a.lo * b
    return quick_two_sum(p.hi, p.lo)


cdef inline dd_t dd_div(dd_t a, dd_t b) noexcept nogil:
    cdef double q1 = a.hi / b.hi
    cdef dd_t r = dd_sub(a, dd_mul_d(b, q1))
    cdef double q2 = r.hi / b.hi
    r = dd_sub(r, dd_mul_d(b, q2))
    cdef double q3 = r.hi / b.hi
    cdef dd_t q = quick_two_sum(q1, q2)
    return dd_add_d(q, q3)


cdef dd_t dd_exp(dd_t a) noexcept nogil:
    cdef double m
    cdef dd_t r, s, p
    cdef int i
    if a.hi > 709.0:
        return dd_make(INFINITY, 0.0)
    if a.hi < -745.0:
        return dd_make(0.0, 0.0)
    m = floor(a.hi / LN2.hi + 0.5)
    r = dd_sub(a, dd_mul_d(LN2, m))
    # scale by 2^-EXP_SQUARINGS (exact)
    r.hi = ldexp(r.hi, -EXP_SQUARINGS)
    r.lo = ldexp(r.lo, -EXP_SQUARINGS)
    # Taylor series of expm1 on |r| <= ln2 / 1024
    s = r
    p = r
    for i in range(2, 14):
        p = dd_mul(p, r)
        p = dd_div(p, dd_make(<double>i, 0.0))
        s = dd_add(s, p)
        if fabs(p.hi) < 1e-36:
            break
    # expm1(2x) = 2 expm1(x) + expm1(x)^2
    for i in range(EXP_SQUARINGS):
        s = dd_add(dd_mul_d(s, 2.0), dd_mul(s, s))
    s = dd_add_d(s, 1.0)
    return dd_make(ldexp(s.hi, <int>m), ldexp(s.lo, <int>m))


cdef dd_t dd_log(dd_t a) noexcept nogil:
    # one Newton step on exp(x) = a from the double estimate
    cdef dd_t x = dd_make(log(a.hi), 0.0)
    cdef dd_t e = dd_exp(dd_neg(x))
    x = dd_add(x, dd_add_d(dd_mul(a, e), -1.0))
    return x


cdef dd_t dd_lgamma(dd_t x) noexcept nogil:
    """log Gamma(x) for x > 0 via upward shift and Stirling's series."""
    cdef dd_t y = x
    cdef dd_t prod = dd_make(1.0, 0.0)
    cdef bint shifted = False
    cdef dd_t res, inv, inv2, term, acc
    cdef int j
    while y.hi < STIRLING_SHIFT:
        prod = dd_mul(prod, y)
        y = dd_add_d(y, 1.0)
        shifted = True
    res = dd_mul(dd_add_d(y, -0.5), dd_log(y))
    res = dd_sub(res, y)
    res = dd_add(res, HALF_LOG_2PI)
    inv = dd_div(dd_make(1.0, 0.0), y)
    inv2 = dd_mul(inv, inv)
    term = inv
    acc = dd_make(0.0, 0.0)
    for j in range(N_STIRLING):
        acc = dd_add(acc, dd_mul(dd_make(STIRLING_HI[j], STIRLING_LO[j]), term))
        term = dd_mul(term, inv2)
    res = dd_add(res, acc)
    if shifted:
        res = dd_sub(res, dd_log(prod))
    return res


# -- python-visible dd helpers (used by tests) ------------------------------

def exp_dd(double hi, double lo=0.0):
    cdef dd_t r = dd_exp(dd_make(hi, lo))
    return r.hi, r.lo


def log_dd(double hi, double lo=0.0):
    cdef dd_t r = dd_log(dd_make(hi, lo))
    return r.hi, r.lo


def lgamma_dd(double hi, double lo=0.0):
    cdef dd_t r = dd_lgamma(dd_make(hi, lo))
    return r.hi, r.lo


# -- Mittag-Leffler power series -------------------------------------------

cdef inline bint _small(double a, double s, double prev, double rel_tol, double abs_tol) noexcept nogil:
    cdef double bound = rel_tol * fabs(s)
    if abs_tol > bound:
        bound = abs_tol
    return a <= bound and a <= prev


def series_double(double alpha, double beta, double z, double rel_tol,
                  double abs_tol, long max_terms):
    """Neumaier-compensated partial sums of sum_k z^k / Gamma(alpha k + beta).

    Returns ``(value, max_partial, abs_sum, neglected, n_terms, converged)``.
    """
    cdef double r = fabs(z)
    cdef double logr = log(r)
    cdef double s = 0.0, c = 0.0, t, term, a, x
    cdef double max_partial = 0.0, abs_sum = 0.0, prev = INFINITY, neglected = 0.0
    cdef bint prev_small = False, small, converged = False
    cdef long k, n = 0
    with nogil:
        for k in range(max_terms):
            x = alpha * k + beta
            if x < 170.0 and k * logr < 700.0:
                term = pow(r, <double>k) / tgamma(x)
            else:
                term = exp(k * logr - lgamma(x))
            if z < 0.0 and (k & 1):
                term = -term
            a = fabs(term)
            small = _small(a, s + c, prev, rel_tol, abs_tol)
            if small and prev_small:
                neglected = a
                converged = True
                break
            t = s + term
            if fabs(s) >= a:
                c += (s - t) + term
            else:
                c += (term - t) + s
            s = t
            abs_sum += a
            n += 1
            if fabs(s + c) > max_partial:
                max_partial = fabs(s + c)
            prev_small = small
            prev = a
    if not converged:
        neglected = prev
    return s + c, max_partial, abs_sum, neglected, n, converged


def series_dd(double alpha, double beta, double z, double rel_tol,
              double abs_tol, long max_terms):
    """Same series with every term and the accumulator in double-double.

    Returns ``(value, max_partial, abs_sum, neglected, n_terms, converged,
    max_exponent)``
    where ``max_exponent`` is the largest |log term| seen (drives the error
    estimate of the exponential evaluation).
    """
    cdef double r = fabs(z)
    cdef dd_t logr = dd_log(dd_make(r, 0.0))
    cdef dd_t s = dd_make(0.0, 0.0), x, expo, term
    cdef double a, max_partial = 0.0, abs_sum = 0.0, prev = INFINITY, neglected = 0.0
    cdef double max_expo = 0.0
    cdef bint prev_small = False, small, converged = False
    cdef long k, n = 0
    with nogil:
        for k in range(max_terms):
            x = dd_add_d(two_prod(alpha, <double>k), beta)
            expo = dd_sub(dd_mul_d(logr, <double>k), dd_lgamma(x))
            if fabs(expo.hi) > max_expo:
                max_expo = fabs(expo.hi)
            term = dd_exp(expo)
            if z < 0.0 and (k & 1):
                term = dd_neg(term)
            a = fabs(term.hi)
            small = _small(a, s.hi, prev, rel_tol, abs_tol)
            if small and prev_small:
                neglected = a
                converged = True
                break
            s = dd_add(s, term)
            abs_sum += a
            n += 1
            if fabs(s.hi) > max_partial:
                max_partial = fabs(s.hi)
            prev_small = small
            prev = a
    if not converged:
        neglected = prev
    return s.hi + s.lo, max_partial, abs_sum, neglected, n, converged, max_expo


# -- L1 Caputo convolution -------------------------------------------------

def l1_convolve(const double[::1] diff, const double[::1] weights):
    """out[n] = sum_{j<n} weights[j] * diff[n-1-j] for n = 1..M; out[0] = 0."""
    cdef Py_ssize_t m = diff.shape[0]
    out = np.zeros(m + 1)
    cdef double[::1] o = out
    cdef Py_ssize_t n, j, k
    cdef double a0, a1, a2, a3
    with nogil:
        for n in range(1, m + 1):
            # four independent chains; the FMA-free build is otherwise latency bound
            a0 = a1 = a2 = a3 = 0.0
            k = n - n % 4
            for j in range(0, k, 4):
                a0 += weights[j] * diff[n - 1 - j]
                a1 += weights[j + 1] * diff[n - 2 - j]
                a2 += weights[j + 2] * diff[n - 3 - j]
                a3 += weights[j + 3] * diff[n - 4 - j]
            for j in range(k, n):
                a0 += weights[j] * diff[n - 1 - j]
            o[n] = (a0 + a1) + (a2 + a3)
    return out


# -- modal summation ---------------------------------------------------------

def modal_sum(const double[:, :] profiles, const double[:, :] shapes):
    """u[i, j] = sum_m profiles[m, i] * shapes[m, j], compensated, fixed order."""
    cdef Py_ssize_t nm = profiles.shape[0]
    cdef Py_ssize_t nx = profiles.shape[1]
    cdef Py_ssize_t ny = shapes.shape[1]
    out = np.zeros((nx, ny))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, m
    cdef double s, c, v, t
    with nogil:
        for i in range(nx):
            for j in range(ny):
                s = 0.0
                c = 0.0
                for m in range(nm):
                    v = profiles[m, i] * shapes[m, j]
                    t = s + v
                    if fabs(s) >= fabs(v):
                        c += (s - t) + v
                    else:
                        c += (v - t) + s
                    s = t
                o[i, j] = s + c
    return out

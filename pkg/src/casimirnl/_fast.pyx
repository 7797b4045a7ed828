# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the hot kernels in ``_kernels_py``.

Same signatures, same float64 semantics; scalar loops instead of numpy
temporaries, which pays off on the short arrays (10-100 elements) these
kernels see inside adaptive quadrature panels.
"""

import math

import numpy as np

from libc.math cimport exp, fabs, log, log1p

ZETA2 = 1.6449340668482264
ZETA3 = 1.2020569031595942854

cdef double _ZETA2 = 1.6449340668482264
cdef double _ZETA3 = 1.2020569031595942854

# B_{2m}/((2m)(2m+1)!) and -B_{2m}/((2m)(2m+2)!) for m = 1..15
cdef double[15] _LI2C
cdef double[15] _LI3C

_BERN = [1.0/6.0, -1.0/30.0, 1.0/42.0, -1.0/30.0, 5.0/66.0,
         -691.0/2730.0, 7.0/6.0, -3617.0/510.0, 43867.0/798.0,
         -174611.0/330.0, 854513.0/138.0, -236364091.0/2730.0,
         8553103.0/6.0, -23749461029.0/870.0, 8615841276005.0/14322.0]
for _m in range(1, 16):
    _LI2C[_m - 1] = _BERN[_m - 1] / ((2 * _m) * math.factorial(2 * _m + 1))
    _LI3C[_m - 1] = -_BERN[_m - 1] / ((2 * _m) * math.factorial(2 * _m + 2))


cdef inline double _li2(double y) nogil:
    cdef double acc, ypow, y2, x, term
    cdef int m, n
    if y < 1.0:
        if y <= 0.0:
            return _ZETA2
        acc = _ZETA2 + y * log(y) - y - 0.25 * y * y
        y2 = y * y
        ypow = y * y2
        for m in range(15):
            acc += _LI2C[m] * ypow
            ypow *= y2
        return acc
    x = exp(-y)
    acc = 0.0
    term = x
    n = 1
    while True:
        acc += term / (n * n)
        n += 1
        term *= x
        if (n - 1) * y > 37.0 or n > 80:
            break
    return acc


cdef inline double _li3(double y) nogil:
    cdef double acc, ypow, y2, x, term
    cdef int m, n
    if y < 1.0:
        if y <= 0.0:
            return _ZETA3
        acc = (_ZETA3 - _ZETA2 * y + 0.5 * y * y * (1.5 - log(y))
               + y * y * y / 12.0)
        y2 = y * y
        ypow = y2 * y2
        for m in range(15):
            acc += _LI3C[m] * ypow
            ypow *= y2
        return acc
    x = exp(-y)
    acc = 0.0
    term = x
    n = 1
    while True:
        acc += term / (<double> n * n * n)
        n += 1
        term *= x
        if (n - 1) * y > 37.0 or n > 80:
            break
    return acc


cdef double[::1] _as_view(object x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))


def polylog2_exp(y):
    """Li2(e^-y) for y >= 0."""
    cdef double[::1] yv = _as_view(y)
    out = np.empty(yv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(yv.shape[0]):
        ov[i] = _li2(yv[i])
    return out


def polylog3_exp(y):
    """Li3(e^-y) for y >= 0."""
    cdef double[::1] yv = _as_view(y)
    out = np.empty(yv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(yv.shape[0]):
        ov[i] = _li3(yv[i])
    return out


def bose_tail_force(y):
    """S(y) = integral_y^inf x^2/(e^x-1) dx; S(0) = 2 zeta(3)."""
    cdef double[::1] yv = _as_view(y)
    out = np.empty(yv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double yy
    for i in range(yv.shape[0]):
        yy = yv[i]
        if yy <= 0.0:
            ov[i] = 2.0 * _ZETA3
        else:
            ov[i] = (-yy * yy * log1p(-exp(-yy))
                     + 2.0 * yy * _li2(yy) + 2.0 * _li3(yy))
    return out


def bose_tail_energy(y):
    """L(y) = -integral_y^inf x ln(1-e^-x) dx; L(0) = zeta(3)."""
    cdef double[::1] yv = _as_view(y)
    out = np.empty(yv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double yy
    for i in range(yv.shape[0]):
        yy = yv[i]
        ov[i] = yy * _li2(yy) + _li3(yy)
    return out


def eps_imag_axis(xi, background, plasma, resonance, damping):
    """Drude-Lorentz eps(i xi); see the numpy twin for conventions."""
    cdef double bg = background
    cdef double[::1] xv = _as_view(xi)
    cdef double[::1] wp = _as_view(list(plasma) or [0.0])
    cdef double[::1] w0 = _as_view(list(resonance) or [0.0])
    cdef double[::1] gm = _as_view(list(damping) or [0.0])
    cdef Py_ssize_t nosc = len(list(plasma))
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double x, acc
    for i in range(xv.shape[0]):
        x = xv[i]
        acc = bg
        for j in range(nosc):
            acc += wp[j] / (w0[j] * w0[j] + x * x + gm[j] * x)
        ov[i] = acc
    return out


def xi2_eps_imag_axis(xi, background, plasma, resonance, damping):
    """xi^2 eps(i xi), finite at xi = 0 for every oscillator type."""
    cdef double bg = background
    cdef double[::1] xv = _as_view(xi)
    cdef double[::1] wp = _as_view(list(plasma) or [0.0])
    cdef double[::1] w0 = _as_view(list(resonance) or [0.0])
    cdef double[::1] gm = _as_view(list(damping) or [0.0])
    cdef Py_ssize_t nosc = len(list(plasma))
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double x, x2, acc, den
    for i in range(xv.shape[0]):
        x = xv[i]
        x2 = x * x
        acc = bg * x2
        for j in range(nosc):
            if w0[j] == 0.0 and gm[j] == 0.0:
                acc += wp[j]
            else:
                den = w0[j] * w0[j] + x2 + gm[j] * x
                if den > 0.0:
                    acc += wp[j] * x2 / den
        ov[i] = acc
    return out


def interp_semilogx(log_grid, values, x):
    """Piecewise-linear interpolation in (ln x, value), zero outside."""
    cdef double[::1] lg = _as_view(log_grid)
    cdef double[::1] vv = _as_view(values)
    cdef double[::1] xv = _as_view(x)
    out = np.zeros(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, lo, hi, mid, n = lg.shape[0]
    cdef double lx, lam
    for i in range(xv.shape[0]):
        if xv[i] <= 0.0:
            continue
        lx = log(xv[i])
        if lx < lg[0] or lx > lg[n - 1]:
            continue
        lo = 0
        hi = n - 1
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if lg[mid] <= lx:
                lo = mid
            else:
                hi = mid
        lam = (lx - lg[lo]) / (lg[lo + 1] - lg[lo])
        ov[i] = (1.0 - lam) * vv[lo] + lam * vv[lo + 1]
    return out


def pv_grid_transform(grid, fvals, double w):
    """PV integral of the piecewise-linear interpolant against
    1/(x^2 - w^2); node-grouped closed form (see the numpy twin)."""
    cdef double[::1] x = _as_view(grid)
    cdef double[::1] f = _as_view(fvals)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k
    cdef double aL, bL, aR, bR, cm, cp, dm, lm, lp, total, eps
    eps = 5e-16 * (fabs(w) if fabs(w) > x[n - 1] else x[n - 1])
    total = 0.0
    for k in range(n):
        if k > 0:
            aL = (f[k] - f[k - 1]) / (x[k] - x[k - 1])
            bL = f[k - 1] - aL * x[k - 1]
        else:
            aL = 0.0
            bL = 0.0
        if k < n - 1:
            aR = (f[k + 1] - f[k]) / (x[k + 1] - x[k])
            bR = f[k] - aR * x[k]
        else:
            aR = 0.0
            bR = 0.0
        cm = 0.5 * (aL - aR) + (bL - bR) / (2.0 * w)
        cp = 0.5 * (aL - aR) - (bL - bR) / (2.0 * w)
        dm = fabs(x[k] - w)
        lm = 0.0 if dm < eps else log(dm)
        lp = log(x[k] + w)
        total += cm * lm + cp * lp
    return total

"""Pure numpy implementations of the hot numerical kernels.

The Cython module ``casimirnl._fast`` provides drop-in replacements for
everything here; ``casimirnl._backend`` picks whichever is available.
Signatures are scalar-or-array in, array out, float64 only.
"""

import numpy as np

ZETA2 = np.pi**2 / 6.0
ZETA3 = 1.2020569031595942854
APERY = ZETA3  # alias occasionally clearer in force formulas

# B_{2m} for m = 1..15; enough for machine precision at the y=1 switchover
_BERNOULLI_2M = np.array([
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
    8553103.0 / 6.0, -23749461029.0 / 870.0, 8615841276005.0 / 14322.0,
])

_SERIES_SWITCH = 1.0


def _factorial(n):
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out

# coefficients of y^{2m+1} in Li2(e^-y) and y^{2m+2} in Li3(e^-y)
_LI2_COEFF = np.array([_BERNOULLI_2M[m - 1] / ((2 * m) * _factorial(2 * m + 1))
                       for m in range(1, 16)])
_LI3_COEFF = np.array([-_BERNOULLI_2M[m - 1] / ((2 * m) * _factorial(2 * m + 2))
                       for m in range(1, 16)])


def polylog2_exp(y):
    """Li2(e^-y) for y >= 0, machine precision."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    out = np.empty_like(y)
    small = y < _SERIES_SWITCH
    ys = y[small]
    if ys.size:
        logy = np.where(ys > 0.0, np.log(np.where(ys > 0.0, ys, 1.0)), 0.0)
        acc = ZETA2 + ys * logy - ys - 0.25 * ys * ys
        ypow = ys**3
        y2 = ys * ys
        for c in _LI2_COEFF:
            acc += c * ypow
            ypow = ypow * y2
        out[small] = acc
    yl = y[~small]
    if yl.size:
        x = np.exp(-yl)
        acc = np.zeros_like(yl)
        term = x.copy()
        n = 1
        while True:
            acc += term / (n * n)
            n += 1
            term = term * x
            if (n - 1) * yl.min() > 37.0 or n > 80:
                break
        out[~small] = acc
    return out


def polylog3_exp(y):
    """Li3(e^-y) for y >= 0, machine precision."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    out = np.empty_like(y)
    small = y < _SERIES_SWITCH
    ys = y[small]
    if ys.size:
        logy = np.where(ys > 0.0, np.log(np.where(ys > 0.0, ys, 1.0)), 0.0)
        acc = ZETA3 - ZETA2 * ys + 0.5 * ys * ys * (1.5 - logy) + ys**3 / 12.0
        ypow = ys**4
        y2 = ys * ys
        for c in _LI3_COEFF:
            acc += c * ypow
            ypow = ypow * y2
        out[small] = acc
    yl = y[~small]
    if yl.size:
        x = np.exp(-yl)
        acc = np.zeros_like(yl)
        term = x.copy()
        n = 1
        while True:
            acc += term / (n * n * n)
            n += 1
            term = term * x
            if (n - 1) * yl.min() > 37.0 or n > 80:
                break
        out[~small] = acc
    return out


def bose_tail_force(y):
    """S(y) = integral_y^inf x^2/(e^x - 1) dx, the transverse-momentum
    antiderivative of the force integrand.  S(0) = 2 zeta(3)."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    pos = y > 0.0
    out = np.full_like(y, 2.0 * ZETA3)
    yp = y[pos]
    if yp.size:
        out[pos] = (-yp * yp * np.log1p(-np.exp(-yp))
                    + 2.0 * yp * polylog2_exp(yp)
                    + 2.0 * polylog3_exp(yp))
    return out


def bose_tail_energy(y):
    """L(y) = -integral_y^inf x ln(1 - e^-x) dx >= 0.  L(0) = zeta(3)."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    return y * polylog2_exp(y) + polylog3_exp(y)


def eps_imag_axis(xi, background, plasma, resonance, damping):
    """Drude-Lorentz permittivity on the imaginary frequency axis.

    eps(i xi) = background + sum_j wp2_j / (w0_j^2 + xi^2 + gamma_j xi).
    Diverges at xi = 0 for undamped zero-resonance oscillators; use
    ``xi2_eps_imag_axis`` inside dispersion factors.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = np.full_like(xi, float(background))
    for wp2, w0, g in zip(plasma, resonance, damping):
        out += wp2 / (w0 * w0 + xi * xi + g * xi)
    return out


def xi2_eps_imag_axis(xi, background, plasma, resonance, damping):
    """xi^2 * eps(i xi), finite down to xi = 0 for every oscillator type.

    The xi -> 0 limit of each term is 0 except for the undamped
    zero-resonance (pure plasma) case, where it is wp2.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    xi2 = xi * xi
    out = float(background) * xi2
    for wp2, w0, g in zip(plasma, resonance, damping):
        den = w0 * w0 + xi2 + g * xi
        if w0 == 0.0 and g == 0.0:
            out += wp2
        else:
            term = np.where(den > 0.0, wp2 * xi2 / np.where(den > 0.0, den, 1.0),
                            0.0)
            out += term
    return out


def interp_semilogx(log_grid, values, x):
    """Piecewise-linear interpolation in (ln x, value), zero outside."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(x)
    ok = x > 0.0
    lx = np.log(np.where(ok, x, 1.0))
    inside = ok & (lx >= log_grid[0]) & (lx <= log_grid[-1])
    out[inside] = np.interp(lx[inside], log_grid, values)
    return out


def pv_grid_transform(grid, fvals, w):
    """PV integral of f~(x)/(x^2 - w^2) over the grid span, f~ the
    piecewise-linear interpolant of (grid, fvals).

    Exact for the interpolant: each segment integrates in closed form and
    the log-singular terms are grouped per node, where their coefficients
    cancel analytically as x_k -> w.  Requires w > 0.
    """
    x = np.asarray(grid, dtype=np.float64)
    f = np.asarray(fvals, dtype=np.float64)
    a = np.diff(f) / np.diff(x)
    b = f[:-1] - a * x[:-1]
    aL = np.concatenate(([0.0], a))
    bL = np.concatenate(([0.0], b))
    aR = np.concatenate((a, [0.0]))
    bR = np.concatenate((b, [0.0]))
    cm = 0.5 * (aL - aR) + (bL - bR) / (2.0 * w)
    cp = 0.5 * (aL - aR) - (bL - bR) / (2.0 * w)
    dm = np.abs(x - w)
    eps = 5e-16 * max(abs(w), x[-1])
    lm = np.where(dm < eps, 0.0, np.log(np.maximum(dm, eps)))
    lp = np.log(x + w)
    return float(np.sum(cm * lm + cp * lp))

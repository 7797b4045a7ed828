"""Tabulated real functions of one frequency and their singular transforms."""

from dataclasses import dataclass, field

import numpy as np

from . import _backend as bk
from .errors import GridTooCoarse

__all__ = ["SpectralFunction", "pv_transform", "pv_transform_with_error"]


@dataclass(frozen=True)
class SpectralFunction:
    """A real function of frequency sampled on a strictly increasing grid.

    Evaluation between nodes is piecewise linear in (ln w, value) by
    default ("log-linear"); outside the grid the declared extrapolation
    rule applies: "zero" (default) or "power" (a power-law tail continuing
    the last two samples above the grid; below the grid always zero).
    """

    grid: np.ndarray
    values: np.ndarray
    extrapolation: str = "zero"
    interpolation: str = "log-linear"
    _log_grid: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be 1-D with at least two nodes")
        if not np.all(np.diff(grid) > 0.0):
            raise ValueError("grid must be strictly increasing")
        if grid[0] <= 0.0:
            raise ValueError("grid frequencies must be positive")
        if values.shape != grid.shape:
            raise ValueError("values must match the grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if self.extrapolation not in ("zero", "power"):
            raise ValueError(f"unknown extrapolation {self.extrapolation!r}")
        if self.interpolation not in ("log-linear", "linear"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_log_grid", np.log(grid))

    @classmethod
    def from_callable(cls, fn, grid, **kwargs):
        grid = np.asarray(grid, dtype=np.float64)
        return cls(grid, np.asarray(fn(grid), dtype=np.float64), **kwargs)

    def __call__(self, w):
        w = np.atleast_1d(np.asarray(w, dtype=np.float64))
        if self.interpolation == "log-linear":
            out = bk.interp_semilogx(self._log_grid, self.values, w)
        else:
            out = np.where((w >= self.grid[0]) & (w <= self.grid[-1]),
                           np.interp(w, self.grid, self.values), 0.0)
        if self.extrapolation == "power":
            above = w > self.grid[-1]
            if np.any(above):
                p = self._tail_exponent()
                out[above] = self.values[-1] * (w[above] / self.grid[-1]) ** p
        if out.size == 1:
            return float(out[0])
        return out

    def _tail_exponent(self):
        y0, y1 = self.values[-2], self.values[-1]
        if y0 <= 0.0 or y1 <= 0.0:
            return 0.0
        return float(np.log(y1 / y0) / np.log(self.grid[-1] / self.grid[-2]))

    def scaled(self, factor):
        return SpectralFunction(self.grid, factor * self.values,
                                self.extrapolation, self.interpolation)

    def with_values(self, values):
        return SpectralFunction(self.grid, values,
                                self.extrapolation, self.interpolation)

    def coarsened(self):
        """Every other node (endpoints kept); used for error estimation."""
        idx = np.unique(np.concatenate([np.arange(0, self.grid.size, 2),
                                        [self.grid.size - 1]]))
        return SpectralFunction(self.grid[idx], self.values[idx],
                                self.extrapolation, self.interpolation)

    def to_csv(self, path, header=("frequency", "value")):
        """Two-column CSV export."""
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            for w, v in zip(self.grid, self.values):
                fh.write(f"{w:.16e},{v:.16e}\n")

    @classmethod
    def from_csv(cls, path, **kwargs):
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return cls(data[:, 0], data[:, 1], **kwargs)


def merged_grid(*functions):
    return np.unique(np.concatenate([f.grid for f in functions]))


def pv_weights(grid, w):
    """Node weights W with sum_k W_k f_k = PV int f~(x)/(x^2-w^2) dx.

    Same closed form as :func:`pv_transform`, expressed as a linear
    functional so it can be contracted along one axis of a tabulated
    multidimensional kernel.
    """
    if w <= 0.0:
        raise ValueError("pv_weights requires w > 0")
    x = np.asarray(grid, dtype=np.float64)
    dm = np.abs(x - w)
    eps = 5e-16 * max(abs(w), x[-1])
    lm = np.where(dm < eps, 0.0, np.log(np.maximum(dm, eps)))
    lp = np.log(x + w)
    # per segment i: I_i = a_i A_i + b_i B_i with a,b the slope/intercept
    A = 0.5 * (lm[1:] + lp[1:] - lm[:-1] - lp[:-1])
    B = (lm[1:] - lp[1:] - lm[:-1] + lp[:-1]) / (2.0 * w)
    dx = np.diff(x)
    slope_w = (A - x[:-1] * B) / dx
    weights = np.zeros_like(x)
    np.add.at(weights, np.arange(x.size - 1), B - slope_w)
    np.add.at(weights, np.arange(1, x.size), slope_w)
    return weights


def sine_weights(grid, t):
    """Node weights for int f~(x) sin(x t)/x dx over the grid span, t > 0.

    Closed form per segment via the sine integral, so oscillatory t costs
    nothing; contract with the sample values along one axis.
    """
    if t <= 0.0:
        raise ValueError("sine_weights requires t > 0")
    from scipy.special import sici
    x = np.asarray(grid, dtype=np.float64)
    si, _ = sici(x * t)
    cos = np.cos(x * t)
    # segment i: a_i (cos_i - cos_{i+1})/t + b_i (Si_{i+1} - Si_i)
    A = (cos[:-1] - cos[1:]) / t
    B = si[1:] - si[:-1]
    dx = np.diff(x)
    slope_w = (A - x[:-1] * B) / dx
    weights = np.zeros_like(x)
    np.add.at(weights, np.arange(x.size - 1), B - slope_w)
    np.add.at(weights, np.arange(1, x.size), slope_w)
    return weights


def interp_weights(grid, w):
    """Node weights of log-linear interpolation at w (zero outside the span)."""
    x = np.asarray(grid, dtype=np.float64)
    weights = np.zeros_like(x)
    if w < x[0] or w > x[-1] or w <= 0.0:
        return weights
    i = int(np.searchsorted(x, w)) - 1
    i = min(max(i, 0), x.size - 2)
    lam = np.log(w / x[i]) / np.log(x[i + 1] / x[i])
    weights[i] = 1.0 - lam
    weights[i + 1] = lam
    return weights


def pv_transform(grid, fvals, w):
    """PV integral of the tabulated f over its span against 1/(x^2 - w^2).

    Exact closed form for the piecewise-linear interpolant; works for
    complex-valued samples (applied to real and imaginary parts).  w > 0.
    """
    if w <= 0.0:
        raise ValueError("pv_transform requires w > 0")
    fvals = np.asarray(fvals)
    if np.iscomplexobj(fvals):
        return (bk.pv_grid_transform(grid, fvals.real, w)
                + 1j * bk.pv_grid_transform(grid, fvals.imag, w))
    return bk.pv_grid_transform(grid, fvals, w)


def pv_transform_with_error(grid, fvals, w, tol=None):
    """PV transform plus a grid-coarsening (Richardson) error estimate.

    Raises GridTooCoarse when a tolerance is given and the estimate
    exceeds it.
    """
    full = pv_transform(grid, fvals, w)
    grid = np.asarray(grid)
    idx = np.unique(np.concatenate([np.arange(0, grid.size, 2),
                                    [grid.size - 1]]))
    half = pv_transform(grid[idx], np.asarray(fvals)[idx], w)
    # piecewise-linear scheme is O(h^2): coarse error ~ 4x fine error
    err = abs(full - half) / 3.0
    if tol is not None and err > tol:
        raise GridTooCoarse(
            f"PV quadrature error estimate {err:.3e} exceeds tolerance "
            f"{tol:.3e} at w={w:.6g}; refine the spectral grid")
    return full, err

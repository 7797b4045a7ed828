"""Nonlinear response algebra: conversions among coupling kernels,
frequency-domain susceptibilities, time-domain kernels and absorptive
parts, for nonlinearity orders two and three (the machinery is generic
in the order).

Every multidimensional operation reduces one axis at a time with exact
closed-form linear functionals over the tabulation (principal value plus
pole term, or sine transforms), so there is no softening parameter
anywhere and homogeneity in the kernels is exact.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DivisionBySpectrum, GridTooCoarse
from .spectral import (SpectralFunction, interp_weights, pv_weights,
                       sine_weights)

__all__ = [
    "NonlinearKernel", "SusceptibilityKernel",
    "chi_n_from_couplings", "chi2", "chi_n_time_domain",
    "im_chi_n", "coupling_n_from_im_chi",
]

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class NonlinearKernel:
    """Coupling kernel of order n >= 2.

    Either separable (a gain times one spectral factor per axis) or
    tabulated on a per-axis strictly increasing grid with multilinear
    interpolation in log frequency and zero outside the box.
    """

    order: int
    kind: str
    gain: float = 1.0
    factors: tuple = ()
    axes: tuple = ()
    samples: np.ndarray | None = None
    symmetric: bool = False

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("nonlinear kernels start at order 2")
        if self.kind == "separable":
            if len(self.factors) != self.order:
                raise ValueError("separable kernel needs one factor per axis")
            object.__setattr__(self, "factors", tuple(self.factors))
            if self.symmetric and not all(
                    np.array_equal(f.grid, self.factors[0].grid)
                    and np.array_equal(f.values, self.factors[0].values)
                    for f in self.factors):
                raise ValueError("symmetric separable kernel needs identical factors")
        elif self.kind == "tabulated":
            axes = tuple(np.asarray(a, dtype=np.float64) for a in self.axes)
            if len(axes) != self.order:
                raise ValueError("tabulated kernel needs one grid per axis")
            for a in axes:
                if a.ndim != 1 or a.size < 2 or not np.all(np.diff(a) > 0) or a[0] <= 0:
                    raise ValueError("axis grids must be strictly increasing and positive")
            samples = np.asarray(self.samples, dtype=np.float64)
            if samples.shape != tuple(a.size for a in axes):
                raise ValueError("samples shape must match the axis grids")
            object.__setattr__(self, "axes", axes)
            object.__setattr__(self, "samples", samples)
            if self.symmetric:
                if not all(np.array_equal(a, axes[0]) for a in axes):
                    raise ValueError("symmetric tabulated kernel needs shared axes")
                scale = np.max(np.abs(samples)) or 1.0
                for perm in itertools.permutations(range(self.order)):
                    if np.max(np.abs(samples - samples.transpose(perm))) > _SYMMETRY_TOL * scale:
                        raise ValueError("samples are not permutation invariant")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @classmethod
    def separable(cls, factors, gain=1.0, symmetric=False):
        return cls(order=len(factors), kind="separable", gain=gain,
                   factors=tuple(factors), symmetric=symmetric)

    @classmethod
    def tabulated(cls, axes, samples, symmetric=False):
        return cls(order=len(axes), kind="tabulated", axes=tuple(axes),
                   samples=np.asarray(samples, dtype=np.float64),
                   symmetric=symmetric)

    def __call__(self, points):
        """Evaluate at an (m, order) batch of frequency points."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if pts.shape[1] != self.order:
            raise ValueError("points must have one column per axis")
        if self.kind == "separable":
            out = np.full(pts.shape[0], self.gain)
            for i, f in enumerate(self.factors):
                out = out * f(pts[:, i])
            return out
        w = np.ones(pts.shape[0])
        idx = []
        lam = []
        for i, a in enumerate(self.axes):
            la = np.log(a)
            x = pts[:, i]
            inside = (x >= a[0]) & (x <= a[-1])
            w = w * inside
            j = np.clip(np.searchsorted(a, x) - 1, 0, a.size - 2)
            frac = np.where(inside & (x > 0),
                            (np.log(np.where(x > 0, x, 1.0)) - la[j]) / (la[j + 1] - la[j]),
                            0.0)
            idx.append(j)
            lam.append(np.clip(frac, 0.0, 1.0))
        out = np.zeros(pts.shape[0])
        for corner in itertools.product((0, 1), repeat=self.order):
            weight = np.ones(pts.shape[0])
            sel = tuple(idx[i] + corner[i] for i in range(self.order))
            for i, c in enumerate(corner):
                weight = weight * (lam[i] if c else (1.0 - lam[i]))
            out += weight * self.samples[sel]
        return out * w

    def scaled(self, factor):
        if self.kind == "separable":
            return NonlinearKernel(self.order, "separable", self.gain * factor,
                                   self.factors, symmetric=self.symmetric)
        return NonlinearKernel(self.order, "tabulated", axes=self.axes,
                               samples=self.samples * factor,
                               symmetric=self.symmetric)

    def support(self):
        """Per-axis (lo, hi) of the tabulated span."""
        if self.kind == "separable":
            return tuple((f.grid[0], f.grid[-1]) for f in self.factors)
        return tuple((a[0], a[-1]) for a in self.axes)

    def coarsened(self):
        """Every other node per axis; used for error estimation."""
        if self.kind == "separable":
            return NonlinearKernel(self.order, "separable", self.gain,
                                   tuple(f.coarsened() for f in self.factors))
        keep = [np.unique(np.concatenate([np.arange(0, a.size, 2), [a.size - 1]]))
                for a in self.axes]
        samples = self.samples
        for i, k in enumerate(keep):
            samples = np.take(samples, k, axis=i)
        return NonlinearKernel(self.order, "tabulated",
                               axes=tuple(a[k] for a, k in zip(self.axes, keep)),
                               samples=samples)

    def to_dict(self):
        if self.kind == "separable":
            return {"kind": "separable", "order": self.order, "gain": self.gain,
                    "symmetric": self.symmetric,
                    "factors": [{"grid": f.grid.tolist(),
                                 "values": f.values.tolist(),
                                 "extrapolation": f.extrapolation}
                                for f in self.factors]}
        return {"kind": "tabulated", "order": self.order,
                "symmetric": self.symmetric,
                "axes": [a.tolist() for a in self.axes],
                "samples": self.samples.ravel().tolist()}

    @classmethod
    def from_dict(cls, data):
        if data["kind"] == "separable":
            factors = tuple(SpectralFunction(np.asarray(f["grid"]),
                                             np.asarray(f["values"]),
                                             f.get("extrapolation", "zero"))
                            for f in data["factors"])
            return cls.separable(factors, gain=data.get("gain", 1.0),
                                 symmetric=data.get("symmetric", False))
        axes = tuple(np.asarray(a, dtype=np.float64) for a in data["axes"])
        shape = tuple(a.size for a in axes)
        samples = np.asarray(data["samples"], dtype=np.float64).reshape(shape)
        return cls.tabulated(axes, samples, symmetric=data.get("symmetric", False))

    def slice_csv(self, path, axis=0, fixed=None, n=200):
        """Export a 1-D cut along one axis to CSV for plotting."""
        lo, hi = self.support()[axis]
        ws = np.geomspace(lo, hi, n)
        pts = np.empty((n, self.order))
        if fixed is None:
            fixed = [0.5 * (l + h) for l, h in self.support()]
        for i in range(self.order):
            pts[:, i] = fixed[i]
        pts[:, axis] = ws
        vals = self(pts)
        with open(path, "w") as fh:
            fh.write("frequency,value\n")
            for w, v in zip(ws, vals):
                fh.write(f"{w:.16e},{v:.16e}\n")


@dataclass(frozen=True)
class SusceptibilityKernel:
    """chi^(n) (complex-capable) or Im chi^(n) (real) of order n >= 2.

    Kernels built from couplings carry their provenance, which is what
    makes the absorptive branch exactly computable; explicit tabulations
    are supported for the real Im chi^(n) kind.
    """

    order: int
    kind: str  # "chi" | "im_chi"
    coupling: NonlinearKernel | None = None
    linear_coupling: SpectralFunction | None = None
    axes: tuple = ()
    samples: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("chi", "im_chi"):
            raise ValueError(f"unknown susceptibility kind {self.kind!r}")
        if self.coupling is not None:
            if self.coupling.order != self.order:
                raise ValueError("provenance order mismatch")
            if self.linear_coupling is None:
                raise ValueError("coupling provenance needs the linear coupling too")
        elif self.samples is not None:
            if self.kind == "im_chi" and np.iscomplexobj(self.samples):
                raise ValueError("Im chi^(n) tabulations are real")
            axes = tuple(np.asarray(a, dtype=np.float64) for a in self.axes)
            object.__setattr__(self, "axes", axes)
        else:
            raise ValueError("need either coupling provenance or a tabulation")

    @classmethod
    def from_couplings(cls, nu_n, nu_1, kind="chi"):
        return cls(order=nu_n.order, kind=kind, coupling=nu_n,
                   linear_coupling=nu_1)

    @classmethod
    def from_table(cls, axes, samples, kind):
        samples = np.asarray(samples)
        return cls(order=len(axes), kind=kind, axes=tuple(axes),
                   samples=samples)


def _product_spectrum(factor, nu_1):
    """factor(w) * nu_1(w) tabulated on the union grid of the overlap."""
    lo = max(factor.grid[0], nu_1.grid[0])
    hi = min(factor.grid[-1], nu_1.grid[-1])
    if not hi > lo:
        g = np.array([1.0, 2.0])
        return g, np.zeros(2)
    g = np.unique(np.concatenate([factor.grid, nu_1.grid]))
    g = g[(g >= lo) & (g <= hi)]
    return g, np.atleast_1d(factor(g)) * np.atleast_1d(nu_1(g))


def _axis_tables(nu_n, nu_1):
    """Per-axis (grid, kernel*nu1 samples) for the tensor reductions."""
    if nu_n.kind == "separable":
        return [("separable",) + _product_spectrum(f, nu_1) for f in nu_n.factors]
    tables = []
    for a in nu_n.axes:
        tables.append(("tabulated", a, np.atleast_1d(nu_1(a))))
    return tables


def chi_n_from_couplings(nu_n, nu_1, omegas, rel_tol=None):
    """Order-n susceptibility at positive frequencies from the coupling
    kernels, one exact (principal value + pole) reduction per axis.

    With ``rel_tol`` set, the result is re-computed on axis grids thinned
    by two and GridTooCoarse raised when the Richardson estimate of the
    quadrature error exceeds the tolerance.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    if omegas.size != nu_n.order:
        raise ValueError("need one frequency per kernel axis")
    if np.any(omegas <= 0.0):
        raise ValueError("chi_n_from_couplings needs positive frequencies")
    value = _chi_value(nu_n, nu_1, omegas)
    if rel_tol is not None:
        coarse = _chi_value(nu_n.coarsened(), nu_1, omegas)
        err = abs(value - coarse) / 3.0
        if err > rel_tol * max(abs(value), 1e-300):
            raise GridTooCoarse(
                f"chi^({nu_n.order}) quadrature error estimate {err:.3e} "
                f"exceeds rel_tol={rel_tol:.1e}")
    return value


def _chi_value(nu_n, nu_1, omegas):
    if nu_n.kind == "separable":
        out = complex(nu_n.gain)
        for i, f in enumerate(nu_n.factors):
            g, h = _product_spectrum(f, nu_1)
            w = float(omegas[i])
            pv = float(pv_weights(g, w) @ h)
            pole = np.pi / (2.0 * w) * float(interp_weights(g, w) @ h)
            out *= pv + 1j * pole
        return out
    arr = nu_n.samples.astype(np.complex128)
    for i, a in enumerate(nu_n.axes):
        shape = [1] * nu_n.order
        shape[i] = a.size
        arr = arr * np.atleast_1d(nu_1(a)).reshape(shape)
    for i in range(nu_n.order - 1, -1, -1):
        a = nu_n.axes[i]
        w = float(omegas[i])
        wk = pv_weights(a, w) + 1j * np.pi / (2.0 * w) * interp_weights(a, w)
        arr = np.tensordot(arr, wk, axes=([i], [0]))
    return complex(arr)


def chi2(nu_2, nu_1, w1, w2, rel_tol=None):
    """Second-order susceptibility; the order-2 case kept as a named entry."""
    if nu_2.order != 2:
        raise ValueError("chi2 needs an order-2 kernel")
    return chi_n_from_couplings(nu_2, nu_1, (w1, w2), rel_tol=rel_tol)


def chi_n_time_domain(nu_n, nu_1, times):
    """Time-domain order-n kernel; identically zero if any time is <= 0."""
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if times.size != nu_n.order:
        raise ValueError("need one time per kernel axis")
    if np.any(times <= 0.0):
        return 0.0
    if nu_n.kind == "separable":
        out = nu_n.gain
        for i, f in enumerate(nu_n.factors):
            g, h = _product_spectrum(f, nu_1)
            out *= float(sine_weights(g, float(times[i])) @ h)
        return float(out)
    arr = nu_n.samples.copy()
    for i, a in enumerate(nu_n.axes):
        shape = [1] * nu_n.order
        shape[i] = a.size
        arr = arr * np.atleast_1d(nu_1(a)).reshape(shape)
    for i in range(nu_n.order - 1, -1, -1):
        arr = np.tensordot(arr, sine_weights(nu_n.axes[i], float(times[i])),
                           axes=([i], [0]))
    return float(arr)


def im_chi_n(chi_n, omegas):
    """Absorptive part of chi^(n): the full-line sine transform of the
    time-domain kernel, odd under each frequency sign flip.

    For coupling-provenance kernels this is prod_i (pi/w_i) nu^(n)(|w|)
    prod_i nu^(1)(|w_i|) exactly (the convention under which the coupling
    inversion formula below is an exact inverse).  Tabulated Im chi^(n)
    kernels interpolate with the odd extension.  A bare complex chi^(n)
    tabulation has no recoverable absorptive branch and is rejected.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    if omegas.size != chi_n.order:
        raise ValueError("need one frequency per axis")
    if np.any(omegas == 0.0):
        return 0.0
    sign = float(np.prod(np.sign(omegas)))
    aw = np.abs(omegas)
    if chi_n.coupling is not None:
        nu_n, nu_1 = chi_n.coupling, chi_n.linear_coupling
        k = float(nu_n(aw[None, :])[0])
        val = k * float(np.prod(np.pi / aw))
        for i in range(chi_n.order):
            val *= float(nu_1(aw[i]))
        return sign * val
    if chi_n.kind != "im_chi":
        raise ValueError(
            "a complex chi^(n) tabulation carries no recoverable absorptive "
            "branch; build the kernel from couplings instead")
    helper = NonlinearKernel.tabulated(chi_n.axes, chi_n.samples)
    return sign * float(helper(aw[None, :])[0])


def coupling_n_from_im_chi(im_chi_n_kernel, im_chi_1, omegas, floor=1e-12):
    """Invert the absorptive data back to the order-n coupling kernel value.

    sqrt(w_1...w_n) Im chi^(n) / ((2 pi)^{n/2} sqrt(prod Im chi^(1))).
    Raises DivisionBySpectrum inside transparent windows, where the linear
    absorption (relative to its peak) drops below ``floor``.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    n = im_chi_n_kernel.order
    if omegas.size != n:
        raise ValueError("need one frequency per axis")
    im1 = np.array([float(im_chi_1(w)) for w in omegas])
    scale = float(np.max(im_chi_1.values))
    if scale <= 0.0 or np.any(im1 <= floor * scale):
        bad = omegas[im1 <= floor * max(scale, 1e-300)]
        raise DivisionBySpectrum(
            f"Im chi^(1) vanishes at frequencies {bad}; coupling inversion "
            "is undefined in a transparent window")
    num = np.sqrt(np.prod(omegas)) * im_chi_n(im_chi_n_kernel, omegas)
    den = (2.0 * np.pi) ** (n / 2.0) * np.sqrt(np.prod(im1))
    return float(num / den)

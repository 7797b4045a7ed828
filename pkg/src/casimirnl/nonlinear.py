"""Nonlinear corrections to the photon propagator on the imaginary axis.

After rotating the internal convolution frequencies to the imaginary axis
(full real line, crossing the retarded poles of neither factor), every
order collapses to a one-dimensional dispersion integral over the
multi-quantum threshold density

    rho(W) = integral over the simplex sum(w_i) = W of K(w)^2 / prod w_i,
    Delta^(n)(i xi) = 2^(1-n) * integral dW rho(W) W / (W^2 + xi^2),

which is manifestly real, positive and even in xi.  The density is
xi-independent, so correction tables over many Matsubara points cost one
density construction plus cheap closed-form dispersion integrals.

Monte Carlo evaluation (any order, mandatory above 3) integrates the
literal (2n-1)-fold rotated integrand instead and is used to cross-check
the deterministic collapse.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .coupling import NonlinearKernel, im_chi_n
from .errors import (DivisionBySpectrum, NegativeDelta, OrderUnsupported,
                     QuadratureFailure)
from .quadrature import Axis, IntegrationSpec, integrate_1d, integrate_mc, integrate_nd

__all__ = [
    "NonlinearCorrection", "DeltaTable",
    "delta2_imag_axis", "delta3_imag_axis", "delta_n_imag_axis",
    "delta_from_im_chi", "build_delta_table",
]


@dataclass(frozen=True)
class NonlinearCorrection:
    """One evaluated correction: order, value at the evaluation frequency,
    and the propagated error estimate.  Imaginary-axis values are real and
    nonnegative."""

    order: int
    value: float
    frequency: float
    error_estimate: float

    def __post_init__(self):
        if not np.isfinite(self.error_estimate) or self.error_estimate < 0.0:
            raise ValueError("error_estimate must be finite and >= 0")


def _kernel_squared_over_freqs(kernel):
    """Callable K(w)^2 / prod(w_i) on (m, n) batches."""
    def f(pts):
        k = kernel(pts)
        return k * k / np.prod(pts, axis=1)
    return f


def _density_range(kernel):
    sup = kernel.support()
    return sum(s[0] for s in sup), sum(s[1] for s in sup)


def _window_integral(h, a, b, W, rel_tol, max_evaluations):
    """integral_a^b h(w) dw where h carries 1/w and 1/(W-w) edge spikes.

    Split at the midpoint with a log map into each edge, so both spike
    scales are resolved with a handful of panels.
    """
    if not b > a:
        return 0.0, 0.0
    m = 0.5 * (a + b)
    budget = max_evaluations // 2
    spec_l = IntegrationSpec(axes=(Axis("finite-log", a=a, b=m),),
                             rel_tol=rel_tol, abs_tol=1e-300,
                             max_evaluations=budget)
    est_l = integrate_1d(h, spec_l)
    spec_r = IntegrationSpec(axes=(Axis("finite-log", a=W - b, b=W - m),),
                             rel_tol=rel_tol, abs_tol=1e-300,
                             max_evaluations=budget)
    est_r = integrate_1d(lambda v: h(W - v), spec_r)
    value = est_l.value + est_r.value
    return max(value, 0.0), est_l.error_estimate + est_r.error_estimate


def _batched_windows(h, A, B, W, n_panels=12):
    """Window integrals for a whole vector of thresholds in one shot.

    For each j, integrates h(w, W_j) over [A_j, B_j] with a fixed
    composite G7/K15 rule, log-mapped from the midpoint into each edge
    (where the 1/w and 1/(W-w) spikes live).  One vectorized call to h for
    all nodes, panels and halves; the embedded Gauss/Kronrod discrepancy
    is the per-node error.
    """
    from .quadrature import _NODES, _WGFULL, _WK
    A = np.asarray(A); B = np.asarray(B); W = np.asarray(W)
    n = A.size
    vals = np.zeros(n)
    errs = np.zeros(n)
    ok = B > A
    if not np.any(ok):
        return vals, errs
    Ao, Bo, Wo = A[ok], B[ok], W[ok]
    Mo = 0.5 * (Ao + Bo)
    k_acc = np.zeros(Ao.size)
    g_acc = np.zeros(Ao.size)
    for left in (True, False):
        if left:
            lo, hi = np.log(Ao), np.log(Mo)
        else:
            lo, hi = np.log(Wo - Bo), np.log(Wo - Mo)
        edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, n_panels + 1)
        half = 0.5 * np.diff(edges, axis=1)                     # (m, P)
        t = edges[:, :-1, None] + half[:, :, None] * (_NODES + 1.0)
        x = np.exp(t)                                           # (m, P, 15)
        w = x if left else Wo[:, None, None] - x
        hv = h(w.ravel(), np.broadcast_to(Wo[:, None, None], w.shape).ravel())
        f = hv.reshape(w.shape) * x                             # log-map jacobian
        k_acc += ((f @ _WK) * half).sum(axis=1)
        g_acc += ((f @ _WGFULL) * half).sum(axis=1)
    vals[ok] = np.maximum(k_acc, 0.0)
    errs[ok] = np.abs(k_acc - g_acc)
    return vals, errs


def _pair_window(fa, fb, sup_a, sup_b, W, rel_tol, max_evaluations):
    """integral over the overlap window of fa(w) fb(W - w) dw."""
    a = max(sup_a[0], W - sup_b[1])
    b = min(sup_a[1], W - sup_b[0])
    return _window_integral(lambda w: fa(w) * fb(W - w), a, b, W,
                            rel_tol, max_evaluations)


def _pairwise_density(h, sup_a, sup_b, grid, rel_tol):
    """rho(W) = int h(w, W) over the overlap window, every W at once.

    Panel count doubles until the worst relative embedded error meets the
    tolerance (the windows are log-edge-spiked but otherwise gentle, so a
    couple of rounds suffice).
    """
    A = np.maximum(sup_a[0], grid - sup_b[1])
    B = np.minimum(sup_a[1], grid - sup_b[0])
    for n_panels in (12, 24, 48, 96, 192):
        vals, errs = _batched_windows(h, A, B, grid, n_panels)
        scale = np.max(vals) or 1.0
        if np.max(errs) <= rel_tol * scale:
            break
    return vals, errs


def _threshold_density(kernel, n_nodes=513, rel_tol=1e-8, max_evaluations=200_000):
    """Tabulate rho(W) on a log-spaced grid over the reachable W range.

    Order 2: batched windowed 1-D integrals.  Order 3, separable: staged
    pairwise convolutions, still 1-D throughout.  Order 3, tabulated: a
    2-D cubature per node (slow path).
    """
    w_lo, w_hi = _density_range(kernel)
    grid = np.geomspace(w_lo, w_hi, n_nodes)
    n = kernel.order
    sup = kernel.support()
    sq = _kernel_squared_over_freqs(kernel)
    if n == 2:
        def h(w, W):
            return sq(np.stack([w, W - w], axis=-1))
        rho, err = _pairwise_density(h, sup[0], sup[1], grid, rel_tol)
        return grid, rho, err
    if n != 3:
        raise OrderUnsupported(
            f"deterministic evaluation supports orders 2 and 3, got {n}")
    if kernel.kind == "separable":
        gain2 = kernel.gain ** 2
        f1, f2, f3 = kernel.factors
        g1 = lambda w: np.atleast_1d(f1(w)) ** 2 / w
        g2 = lambda w: np.atleast_1d(f2(w)) ** 2 / w
        g3 = lambda w: np.atleast_1d(f3(w)) ** 2 / w
        lo12 = sup[0][0] + sup[1][0]
        hi12 = sup[0][1] + sup[1][1]
        vgrid = np.geomspace(lo12, hi12, n_nodes)
        r12, e12 = _pairwise_density(lambda w, v: g1(w) * g2(v - w),
                                     sup[0], sup[1], vgrid, rel_tol)
        pair = PchipInterpolator(vgrid, r12, extrapolate=False)

        def g12(v):
            out = np.nan_to_num(pair(np.clip(v, vgrid[0], vgrid[-1])))
            return np.where((v >= vgrid[0]) & (v <= vgrid[-1]), out, 0.0)

        def e12_lin(v):
            return np.interp(v, vgrid, e12, left=0.0, right=0.0)

        rho, e_quad = _pairwise_density(lambda v, W: g12(v) * g3(W - v),
                                        (lo12, hi12), sup[2], grid, rel_tol)
        e_prop, _ = _pairwise_density(lambda v, W: e12_lin(v) * g3(W - v),
                                      (lo12, hi12), sup[2], grid, 1e-2)
        return grid, gain2 * rho, gain2 * (e_quad + e_prop)
    rho = np.zeros(n_nodes)
    err = np.zeros(n_nodes)
    for j, W in enumerate(grid):
        a1 = max(sup[0][0], W - sup[1][1] - sup[2][1])
        b1 = min(sup[0][1], W - sup[1][0] - sup[2][0])
        if not b1 > a1:
            continue
        spec = IntegrationSpec(
            axes=(Axis("finite-log", a=a1, b=b1),
                  Axis("finite-log", a=sup[1][0], b=sup[1][1])),
            rel_tol=rel_tol, abs_tol=1e-300,
            max_evaluations=max_evaluations)

        def f(p, W=W):
            w3 = W - p[:, 0] - p[:, 1]
            ok = (w3 > sup[2][0]) & (w3 < sup[2][1])
            pts = np.stack([p[:, 0], p[:, 1], np.where(ok, w3, sup[2][0])],
                           axis=-1)
            return np.where(ok, sq(pts), 0.0)

        est = integrate_nd(f, spec)
        rho[j] = max(est.value, 0.0)
        err[j] = est.error_estimate
    return grid, rho, err


def _dispersion_integral(w_grid, rho, xi):
    """Closed form of int rho~(W) W/(W^2+xi^2) dW for the piecewise-linear
    interpolant of rho (used for cheap error propagation)."""
    c = w_grid[:-1]
    d = w_grid[1:]
    a = np.diff(rho) / np.diff(w_grid)
    b = rho[:-1] - a * c
    if xi == 0.0:
        seg = a * (d - c) + b * np.log(d / c)
    else:
        seg = (a * ((d - c) - xi * (np.arctan(d / xi) - np.arctan(c / xi)))
               + 0.5 * b * np.log((d * d + xi * xi) / (c * c + xi * xi)))
    return float(np.sum(seg))


def _dispersion_pchip(w_grid, rho, xi, rel_tol=1e-10):
    """Adaptive integral of pchip(rho)(W) W/(W^2+xi^2) over the density span.

    The dispersion kernel has no pole on the span, so this costs no kernel
    evaluations and converges at the interpolant's cubic rate.
    """
    interp = PchipInterpolator(w_grid, rho, extrapolate=False)
    spec = IntegrationSpec(axes=(Axis("finite", a=w_grid[0], b=w_grid[-1]),),
                           rel_tol=rel_tol, abs_tol=1e-300,
                           max_evaluations=60_000)

    def f(W):
        vals = np.nan_to_num(interp(W))
        return vals * W / (W * W + xi * xi)

    return integrate_1d(f, spec).value


def _delta_from_density(grid, rho, node_err, order, xi, rel_tol):
    pref = 0.5 ** (order - 1)
    value = pref * _dispersion_pchip(grid, rho, xi, rel_tol / 8.0)
    # W-resolution error by node thinning (cubic rate), plus node errors
    idx = np.unique(np.concatenate([np.arange(0, grid.size, 2), [grid.size - 1]]))
    coarse = pref * _dispersion_pchip(grid[idx], rho[idx], xi, rel_tol / 8.0)
    err = abs(value - coarse) / 7.0
    err += pref * _dispersion_integral(grid, node_err, xi)
    err += rel_tol / 8.0 * abs(value)
    return value, err


def _delta_deterministic(kernel, xi, rel_tol, max_evaluations):
    grid, rho, node_err = _threshold_density(kernel, rel_tol=rel_tol / 8.0,
                                             max_evaluations=max_evaluations)
    return _delta_from_density(grid, rho, node_err, kernel.order, xi, rel_tol)


def _require_converged(value, err, rel_tol, what):
    if err > rel_tol * max(abs(value), 1e-300) and err > 1e-300:
        raise QuadratureFailure(
            f"{what}: error estimate {err:.3e} exceeds rel_tol={rel_tol:.1e} "
            f"(value {value:.6e})")


def delta2_imag_axis(nu_2, xi, rel_tol=1e-6, max_evaluations=400_000):
    """Second-order propagator correction at imaginary frequency xi >= 0."""
    if nu_2.order != 2:
        raise ValueError("delta2_imag_axis needs an order-2 kernel")
    if xi < 0.0:
        raise ValueError("xi must be >= 0")
    value, err = _delta_deterministic(nu_2, float(xi), rel_tol, max_evaluations)
    _require_converged(value, err, rel_tol, "delta2")
    return NonlinearCorrection(2, max(value, 0.0), float(xi), err)


def delta3_imag_axis(nu_3, xi, rel_tol=1e-6, max_evaluations=400_000,
                     paper_literal=False):
    """Third-order propagator correction at imaginary frequency xi >= 0.

    ``paper_literal`` restores the uncorrected denominator pattern of the
    source expression (third factor carrying the second oscillator
    frequency and a convolution shift truncated to one internal frequency)
    for side-by-side comparison; the default applies the symmetric
    completion used everywhere else.
    """
    if nu_3.order != 3:
        raise ValueError("delta3_imag_axis needs an order-3 kernel")
    if xi < 0.0:
        raise ValueError("xi must be >= 0")
    xi = float(xi)
    if paper_literal:
        value, err = _delta3_literal(nu_3, xi, rel_tol, max_evaluations)
    else:
        value, err = _delta_deterministic(nu_3, xi, rel_tol, max_evaluations)
    _require_converged(value, err, rel_tol, "delta3")
    return NonlinearCorrection(3, max(value, 0.0), xi, err)


def _delta3_literal(kernel, xi, rel_tol, max_evaluations):
    """Literal source variant: 0.25 * int d3w K^2 (w1+w2)/(w1 w2^2 ((w1+w2)^2+xi^2))."""
    sup = kernel.support()

    def f(p):
        k = kernel(p)
        s = p[:, 0] + p[:, 1]
        return k * k * s / (p[:, 0] * p[:, 1] ** 2 * (s * s + xi * xi))

    spec = IntegrationSpec(
        axes=tuple(Axis("finite-log", a=lo, b=hi) for lo, hi in sup),
        rel_tol=rel_tol, abs_tol=1e-300, max_evaluations=max_evaluations)
    est = integrate_nd(f, spec)
    return 0.25 * est.value, 0.25 * est.error_estimate


def _delta_monte_carlo(kernel, xi, rel_tol, max_evaluations, seed):
    """Literal (2n-1)-fold rotated integrand, stratified sampling."""
    n = kernel.order
    sup = kernel.support()
    scale = max(xi, 1.0)
    axes = tuple(Axis("finite-log", a=lo, b=hi) for lo, hi in sup)
    axes = axes + tuple(Axis("real-line", scale=scale) for _ in range(n - 1))

    def f(p):
        w = p[:, :n]
        internal = p[:, n:]
        k = kernel(w)
        out = k * k
        for i in range(1, n):
            out = out / (w[:, i] ** 2 + internal[:, i - 1] ** 2)
        shift = xi - internal.sum(axis=1)
        out = out / (w[:, 0] ** 2 + shift * shift)
        return out

    spec = IntegrationSpec(axes=axes, rel_tol=rel_tol,
                           max_evaluations=max_evaluations, seed=seed)
    est = integrate_mc(f, spec)
    pref = (0.5 / np.pi) ** (n - 1)
    return pref * est.value, pref * est.error_estimate


def delta_n_imag_axis(nu_n, xi, rel_tol=1e-6, method="deterministic",
                      max_evaluations=400_000, seed=1234, paper_literal=False):
    """Order-n correction; dispatches to the closed order-2/3 paths, or to
    Monte Carlo (required above order 3)."""
    if xi < 0.0:
        raise ValueError("xi must be >= 0")
    n = nu_n.order
    if method == "deterministic":
        if n == 2:
            return delta2_imag_axis(nu_n, xi, rel_tol, max_evaluations)
        if n == 3:
            return delta3_imag_axis(nu_n, xi, rel_tol, max_evaluations,
                                    paper_literal=paper_literal)
        raise OrderUnsupported(
            f"deterministic evaluation supports n <= 3, got n={n}; "
            "use method='montecarlo'")
    if method != "montecarlo":
        raise ValueError(f"unknown method {method!r}")
    value, err = _delta_monte_carlo(nu_n, float(xi), rel_tol,
                                    max_evaluations, seed)
    return NonlinearCorrection(n, max(value, 0.0), float(xi), err)


def delta_from_im_chi(im_chi_n_kernel, im_chi_1, frequency, rel_tol=1e-6,
                      output="imag_axis", floor=1e-9, max_evaluations=200_000,
                      n_nodes=193):
    """Correction from absorptive susceptibility data instead of couplings.

    output="spectral": the literal (n-1)-fold integral with the
    2 pi/(8 pi)^n prefactor, i.e. the multi-quantum spectral density at
    the real total frequency W = ``frequency``.

    output="imag_axis": that density completed through the dispersion
    kernel (2^n/pi) int dW W rho(W)/(W^2 + xi^2), comparable with the
    coupling-route corrections at xi = ``frequency``.

    Raises DivisionBySpectrum when the linear absorption drops below
    ``floor`` (relative to its peak) anywhere the integrand needs it.
    """
    n = im_chi_n_kernel.order
    if n not in (2, 3):
        raise OrderUnsupported("susceptibility route implemented for n = 2, 3")
    if im_chi_n_kernel.coupling is not None:
        sup = im_chi_n_kernel.coupling.support()
    else:
        sup = tuple((a[0], a[-1]) for a in im_chi_n_kernel.axes)
    im1_scale = float(np.max(im_chi_1.values))
    if im1_scale <= 0.0:
        raise DivisionBySpectrum("linear absorption vanishes identically")

    def im1(w):
        val = np.atleast_1d(im_chi_1(w))
        if np.any(val <= floor * im1_scale):
            raise DivisionBySpectrum(
                "Im chi^(1) below the floor inside the integration window")
        return val

    def density(W):
        pref = 2.0 * np.pi / (8.0 * np.pi) ** n
        if n == 2:
            a = max(sup[0][0], W - sup[1][1])
            b = min(sup[0][1], W - sup[1][0])
            if not b > a:
                return 0.0, 0.0
            spec = IntegrationSpec(axes=(Axis("finite-log", a=a, b=b),),
                                   rel_tol=rel_tol / 2, abs_tol=1e-300,
                                   max_evaluations=max_evaluations)

            def f(w2):
                vals = np.array([im_chi_n(im_chi_n_kernel, (W - w, w))
                                 for w in w2])
                return vals ** 2 / (im1(W - w2) * im1(w2))

            est = integrate_1d(f, spec)
        else:
            a1 = max(sup[0][0], W - sup[1][1] - sup[2][1])
            b1 = min(sup[0][1], W - sup[1][0] - sup[2][0])
            if not b1 > a1:
                return 0.0, 0.0
            spec = IntegrationSpec(
                axes=(Axis("finite-log", a=a1, b=b1),
                      Axis("finite-log", a=sup[1][0], b=sup[1][1])),
                rel_tol=rel_tol / 2, abs_tol=1e-300,
                max_evaluations=max_evaluations)

            def f(p):
                w3 = W - p[:, 0] - p[:, 1]
                ok = (w3 > sup[2][0]) & (w3 < sup[2][1])
                w3c = np.where(ok, w3, sup[2][0])
                vals = np.array([im_chi_n(im_chi_n_kernel, (x2, x3, xr))
                                 for x2, x3, xr in zip(p[:, 0], p[:, 1], w3c)])
                den = im1(p[:, 0]) * im1(p[:, 1]) * im1(w3c)
                return np.where(ok, vals ** 2 / den, 0.0)

            est = integrate_nd(f, spec)
        return pref * est.value, pref * est.error_estimate

    if output == "spectral":
        value, err = density(float(frequency))
        return NonlinearCorrection(n, value, float(frequency), err)
    if output != "imag_axis":
        raise ValueError(f"unknown output {output!r}")

    xi = float(frequency)
    w_lo, w_hi = sum(s[0] for s in sup), sum(s[1] for s in sup)
    grid = np.geomspace(w_lo, w_hi, n_nodes)
    rho = np.zeros(n_nodes)
    rho_err = np.zeros(n_nodes)
    for j, W in enumerate(grid):
        rho[j], rho_err[j] = density(W)
    pref = 2.0 ** n / np.pi
    value = pref * _dispersion_pchip(grid, rho, xi, rel_tol / 8.0)
    idx = np.unique(np.concatenate([np.arange(0, n_nodes, 2), [n_nodes - 1]]))
    err = abs(value - pref * _dispersion_pchip(grid[idx], rho[idx], xi,
                                               rel_tol / 8.0)) / 7.0
    err += pref * _dispersion_integral(grid, rho_err, xi)
    return NonlinearCorrection(n, max(value, 0.0), xi, err)


@dataclass
class DeltaTable:
    """Imaginary-axis correction tables, one column per order.

    Interpolation is shape-preserving (PCHIP) in xi below the last node
    and continues with the physical A/xi^2 tail above it.  Values must be
    nonnegative; ``validate`` raises NegativeDelta otherwise.
    """

    xi: np.ndarray
    orders: dict
    errors: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xi = np.asarray(self.xi, dtype=np.float64)
        if self.xi.ndim != 1 or self.xi.size < 2:
            raise ValueError("need at least two xi nodes")
        if not np.all(np.diff(self.xi) > 0) or self.xi[0] < 0.0:
            raise ValueError("xi nodes must be increasing and >= 0")
        self.orders = {int(k): np.asarray(v, dtype=np.float64)
                       for k, v in self.orders.items()}
        for v in self.orders.values():
            if v.shape != self.xi.shape:
                raise ValueError("each order column must match the xi grid")
        if not self.errors:
            self.errors = {k: np.zeros_like(self.xi) for k in self.orders}
        self._interps = {k: PchipInterpolator(self.xi, v, extrapolate=False)
                         for k, v in self.orders.items()}

    def validate(self):
        for order, vals in self.orders.items():
            if np.any(vals < 0.0):
                raise NegativeDelta(
                    f"order-{order} table dips to {vals.min():.3e}; "
                    "imaginary-axis corrections must be nonnegative")
        return self

    def is_zero(self):
        return all(np.all(v == 0.0) for v in self.orders.values())

    def total(self, xi):
        """Sum of all orders at xi (scalar or array), with the 1/xi^2 tail."""
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
        out = np.zeros_like(xi_arr)
        last = self.xi[-1]
        inside = xi_arr <= last
        for order, interp in self._interps.items():
            vals = self.orders[order]
            if np.any(inside):
                out[inside] += interp(xi_arr[inside])
            if np.any(~inside):
                out[~inside] += vals[-1] * (last / xi_arr[~inside]) ** 2
        if np.isscalar(xi) or np.ndim(xi) == 0:
            return float(out[0])
        return out

    def to_csv(self, path, metadata=()):
        cols = sorted(self.orders)
        with open(path, "w") as fh:
            for line in metadata:
                fh.write(f"# {line}\n")
            header = ["xi"]
            for k in cols:
                header += [f"delta_{k}", f"error_{k}"]
            fh.write(",".join(header) + "\n")
            for i, x in enumerate(self.xi):
                row = [f"{x:.16e}"]
                for k in cols:
                    row += [f"{self.orders[k][i]:.16e}",
                            f"{self.errors[k][i]:.16e}"]
                fh.write(",".join(row) + "\n")

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
        header = lines[0].strip().split(",")
        data = np.array([[float(x) for x in ln.strip().split(",")]
                         for ln in lines[1:]])
        orders = {}
        errors = {}
        for j, name in enumerate(header):
            if name.startswith("delta_"):
                orders[int(name[6:])] = data[:, j]
            elif name.startswith("error_"):
                errors[int(name[6:])] = data[:, j]
        return cls(data[:, 0], orders, errors)

    @classmethod
    def zero(cls, xi, orders=(2,)):
        xi = np.asarray(xi, dtype=np.float64)
        return cls(xi, {k: np.zeros_like(xi) for k in orders})


def default_xi_grid(kernels, n=48):
    """xi nodes for correction tables: 0 plus log-spaced points scaled to
    the kernels' support range."""
    his = [sum(s[1] for s in k.support()) for k in kernels]
    los = [sum(s[0] for s in k.support()) for k in kernels]
    hi = max(his) * 30.0
    lo = min(los) * 1e-2
    return np.concatenate([[0.0], np.geomspace(lo, hi, n - 1)])


def build_delta_table(kernels, xi_grid=None, rel_tol=1e-6,
                      method="deterministic", seed=1234,
                      max_evaluations=400_000, paper_literal=False):
    """Evaluate every kernel's correction over a xi grid.

    The threshold density of each kernel is built once; each xi node then
    costs a closed-form dispersion integral, so dense Matsubara tables are
    cheap.
    """
    kernels = list(kernels)
    if xi_grid is None:
        xi_grid = default_xi_grid(kernels)
    xi_grid = np.asarray(xi_grid, dtype=np.float64)
    orders = {}
    errors = {}
    for kernel in kernels:
        n = kernel.order
        vals = np.zeros_like(xi_grid)
        errs = np.zeros_like(xi_grid)
        if method == "deterministic" and n in (2, 3) and not paper_literal:
            grid, rho, node_err = _threshold_density(
                kernel, rel_tol=rel_tol / 8.0, max_evaluations=max_evaluations)
            for j, xi in enumerate(xi_grid):
                v, e = _delta_from_density(grid, rho, node_err, n, xi, rel_tol)
                vals[j] = max(v, 0.0)
                errs[j] = e
        else:
            for j, xi in enumerate(xi_grid):
                corr = delta_n_imag_axis(kernel, xi, rel_tol=rel_tol,
                                         method=method, seed=seed + j,
                                         max_evaluations=max_evaluations,
                                         paper_literal=paper_literal)
                vals[j] = corr.value
                errs[j] = corr.error_estimate
        if n in orders:
            orders[n] = orders[n] + vals
            errors[n] = errors[n] + errs
        else:
            orders[n] = vals
            errors[n] = errs
    return DeltaTable(xi_grid, orders, errors).validate()

"""Reusable integration engine.

Three entry points, all returning :class:`IntegralEstimate`:

* :func:`integrate_1d` -- adaptive Gauss-Kronrod (G7, K15) with embedded
  error estimation; integrands are vectorized callables ``f(x: ndarray) ->
  ndarray``.
* :func:`integrate_nd` -- adaptive tensor-panel cubature for up to five
  axes (embedded Gauss/Kronrod errors through three axes, parent/child
  refinement errors above).
* :func:`integrate_mc` -- seeded stratified Monte Carlo with a standard
  error estimate; bitwise deterministic for a fixed spec.

Semi-infinite axes are mapped to the unit interval by the rational map
x = s t/(1-t) (never an exponential map: the force integrands decay like
exp(-2Qh) and the rational map with s ~ 1/(2h) matches that scale without
overflow).  Full-line axes use the two-sided rational map, and "finite-log"
axes integrate in the logarithm of the coordinate, which is what kernel
supports spanning decades want.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooHigh

__all__ = [
    "Axis", "IntegrationSpec", "IntegralEstimate",
    "integrate_1d", "integrate_nd", "integrate_mc",
]

# 15-point Kronrod extension of 7-point Gauss (QUADPACK values)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# nodes on [-1, 1], ascending, with matching Kronrod and (zero-padded) Gauss weights
_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
_WK = np.concatenate((_WGK[:-1], _WGK[::-1]))
_WGFULL = np.zeros(15)
_WGFULL[1:15:2] = np.concatenate((_WG[:-1], _WG[::-1]))

_MIN_PANEL_WIDTH = 1e-14


@dataclass(frozen=True)
class Axis:
    """One integration axis.

    kind:
        "finite"        -- [a, b]
        "finite-log"    -- [a, b] with 0 < a < b, integrated in ln x
        "semi-infinite" -- [0, inf), rational map with the given scale
        "real-line"     -- (-inf, inf), two-sided rational map
    """
    kind: str = "semi-infinite"
    a: float = 0.0
    b: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("finite", "finite-log", "semi-infinite", "real-line"):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.kind in ("finite", "finite-log") and not self.b > self.a:
            raise ValueError("finite axis needs b > a")
        if self.kind == "finite-log" and self.a <= 0.0:
            raise ValueError("finite-log axis needs a > 0")
        if self.kind in ("semi-infinite", "real-line") and not self.scale > 0.0:
            raise ValueError("mapped axis needs a positive scale")

    def to_physical(self, t):
        """Map unit-interval coordinates to the physical axis; returns (x, jacobian)."""
        t = np.asarray(t)
        if self.kind == "finite":
            return self.a + (self.b - self.a) * t, np.full_like(t, self.b - self.a)
        if self.kind == "finite-log":
            span = np.log(self.b / self.a)
            x = self.a * np.exp(t * span)
            return x, x * span
        if self.kind == "semi-infinite":
            om = 1.0 - t
            x = self.scale * t / om
            return x, self.scale / (om * om)
        v = 2.0 * t - 1.0
        om = 1.0 - v * v
        x = self.scale * v / om
        jac = 2.0 * self.scale * (1.0 + v * v) / (om * om)
        return x, jac


@dataclass(frozen=True)
class IntegrationSpec:
    axes: tuple = (Axis(),)
    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_evaluations: int = 100_000
    seed: int | None = None

    def __post_init__(self):
        if self.rel_tol <= 0.0 and self.abs_tol <= 0.0:
            raise ValueError("need a positive tolerance")
        if self.max_evaluations <= 0:
            raise ValueError("max_evaluations must be positive")
        if isinstance(self.axes, Axis):
            object.__setattr__(self, "axes", (self.axes,))
        else:
            object.__setattr__(self, "axes", tuple(self.axes))


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if self.converged and not np.isfinite(self.value):
            raise ValueError("converged estimate must be finite")


def _tolerance(spec, value):
    return max(spec.abs_tol, spec.rel_tol * abs(value))


def _panel_eval(g, lo, hi):
    """Evaluate one or more panels of the mapped integrand g on [0,1].

    lo, hi are arrays of panel bounds; returns (kronrod, gauss) column sums.
    """
    lo = np.asarray(lo)
    half = 0.5 * (np.asarray(hi) - lo)
    nodes = lo[:, None] + half[:, None] * (_NODES[None, :] + 1.0)
    vals = g(nodes.ravel()).reshape(nodes.shape)
    k = (vals @ _WK) * half
    gq = (vals @ _WGFULL) * half
    return k, gq


def integrate_1d(f, spec):
    """Adaptive 1-D quadrature of a vectorized integrand.

    Subdivides the worst panel until the summed Kronrod/Gauss discrepancy
    meets max(abs_tol, rel_tol*|value|) or the evaluation budget runs out,
    in which case the best estimate is returned with ``converged=False``.
    """
    if len(spec.axes) != 1:
        raise ValueError("integrate_1d needs exactly one axis")
    axis = spec.axes[0]

    def g(t):
        x, jac = axis.to_physical(t)
        return np.asarray(f(x), dtype=np.float64) * jac

    lo = np.array([0.0, 0.5])
    hi = np.array([0.5, 1.0])
    k, gq = _panel_eval(g, lo, hi)
    panels = [[lo[i], hi[i], k[i], abs(k[i] - gq[i])] for i in range(2)]
    evals = 30

    while True:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        if err <= _tolerance(spec, total):
            return IntegralEstimate(total, err, evals, True)
        if evals + 30 > spec.max_evaluations:
            return IntegralEstimate(total, err, evals, False)
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b = panels[worst][0], panels[worst][1]
        if b - a < _MIN_PANEL_WIDTH:
            # refinement exhausted at roundoff scale; freeze this panel
            panels[worst][3] = 0.0
            if all(p[3] == 0.0 for p in panels):
                total = sum(p[2] for p in panels)
                return IntegralEstimate(total, abs(total) * 1e-15, evals, True)
            continue
        m = 0.5 * (a + b)
        k, gq = _panel_eval(g, np.array([a, m]), np.array([m, b]))
        panels[worst] = [a, m, k[0], abs(k[0] - gq[0])]
        panels.append([m, b, k[1], abs(k[1] - gq[1])])
        evals += 30


def _tensor_eval(g, lo, hi, d):
    """Tensor G7/K15 evaluation of one box; returns (value, per-axis errors, nvals)."""
    axes_nodes = []
    for i in range(d):
        half = 0.5 * (hi[i] - lo[i])
        axes_nodes.append(lo[i] + half * (_NODES + 1.0))
    mesh = np.meshgrid(*axes_nodes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = g(pts).reshape((15,) * d)
    scale = np.prod([0.5 * (hi[i] - lo[i]) for i in range(d)])

    def contract(weights_by_axis):
        out = vals
        for w in weights_by_axis:
            out = np.tensordot(out, w, axes=([0], [0]))
        return float(out) * scale

    k_full = contract([_WK] * d)
    errs = []
    for i in range(d):
        ws = [_WK] * d
        ws[i] = _WGFULL
        errs.append(abs(k_full - contract(ws)))
    return k_full, errs, 15 ** d


def integrate_nd(f, spec):
    """Adaptive multi-axis cubature; ``f`` takes an (m, d) batch of points.

    Boxes are ranked by their embedded error and split along the axis that
    contributes the largest one-axis Gauss/Kronrod discrepancy.  Above
    three axes the per-box cost of the tensor rule grows too fast to be
    useful; such orders belong to :func:`integrate_mc`.
    """
    d = len(spec.axes)
    if d > 5:
        raise DimensionTooHigh(f"deterministic cubature supports <= 5 axes, got {d}")
    if d == 1:
        return integrate_1d(lambda x: f(x.reshape(-1, 1)), spec)

    def g(pts):
        cols = []
        jac = np.ones(pts.shape[0])
        for i, axis in enumerate(spec.axes):
            x, j = axis.to_physical(pts[:, i])
            cols.append(x)
            jac = jac * j
        phys = np.stack(cols, axis=-1)
        return np.asarray(f(phys), dtype=np.float64) * jac

    lo0 = np.zeros(d)
    hi0 = np.ones(d)
    value, errs, cost = _tensor_eval(g, lo0, hi0, d)
    boxes = [[lo0, hi0, value, errs]]
    evals = cost

    while True:
        total = sum(b[2] for b in boxes)
        err = sum(sum(b[3]) for b in boxes)
        if err <= _tolerance(spec, total):
            return IntegralEstimate(total, err, evals, True)
        if evals + 2 * cost > spec.max_evaluations:
            return IntegralEstimate(total, err, evals, False)
        worst = max(range(len(boxes)), key=lambda i: sum(boxes[i][3]))
        lo, hi, _, berrs = boxes.pop(worst)
        ax = int(np.argmax(berrs))
        if hi[ax] - lo[ax] < _MIN_PANEL_WIDTH:
            boxes.append([lo, hi, _, [0.0] * d])
            if all(sum(b[3]) == 0.0 for b in boxes):
                total = sum(b[2] for b in boxes)
                return IntegralEstimate(total, abs(total) * 1e-15, evals, True)
            continue
        mid = 0.5 * (lo[ax] + hi[ax])
        hi_left = hi.copy(); hi_left[ax] = mid
        lo_right = lo.copy(); lo_right[ax] = mid
        for blo, bhi in ((lo, hi_left), (lo_right, hi)):
            v, e, c = _tensor_eval(g, blo, bhi, d)
            boxes.append([blo, bhi, v, e])
            evals += c


def integrate_mc(f, spec):
    """Stratified Monte Carlo over the mapped unit cube.

    The unit cube is cut into m^d congruent strata with at least two
    samples each; the reported error is the usual stratified standard
    error.  Identical specs (axes, budget, seed) reproduce bitwise
    identical estimates.
    """
    if spec.seed is None:
        raise ValueError("integrate_mc requires a seed")
    d = len(spec.axes)
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    m = max(1, int((spec.max_evaluations / 4.0) ** (1.0 / d)))
    m = min(m, 40 if d <= 2 else 12 if d <= 4 else 6)
    n_strata = m ** d
    k = max(2, spec.max_evaluations // n_strata)

    def g(pts):
        cols = []
        jac = np.ones(pts.shape[0])
        for i, axis in enumerate(spec.axes):
            x, j = axis.to_physical(pts[:, i])
            cols.append(x)
            jac = jac * j
        phys = np.stack(cols, axis=-1)
        return np.asarray(f(phys), dtype=np.float64) * jac

    edges = np.stack(np.meshgrid(*[np.arange(m)] * d, indexing="ij"),
                     axis=-1).reshape(-1, d) / m
    mean_acc = 0.0
    var_acc = 0.0
    chunk = max(1, int(2e6) // max(k, 1))
    for start in range(0, n_strata, chunk):
        cell = edges[start:start + chunk]
        u = rng.random((cell.shape[0], k, d))
        pts = (cell[:, None, :] + u / m).reshape(-1, d)
        vals = g(pts).reshape(cell.shape[0], k)
        mean_acc += vals.mean(axis=1).sum()
        var_acc += (vals.var(axis=1, ddof=1) / k).sum()
    value = mean_acc / n_strata
    err = float(np.sqrt(var_acc)) / n_strata
    evals = n_strata * k
    converged = err <= _tolerance(spec, value)
    return IntegralEstimate(float(value), err, evals, converged)

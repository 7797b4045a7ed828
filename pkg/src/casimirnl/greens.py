"""Propagators and correlators in reciprocal space.

Only scalar amplitudes are materialized: the transverse projector is a
direction factor that never enters the plate force, and the longitudinal
part is local (no force contribution), so both are documented here and
exposed for diagnostics only.
"""

from dataclasses import dataclass

import numpy as np

from .coupling import chi2
from .dispersion import permittivity, permittivity_imag_axis
from .errors import NegativeDelta, PoleProximity

__all__ = [
    "Momentum3", "GreenValue",
    "free_green", "linear_green", "nonlinear_green", "slab_kernel",
    "correlation_em_p", "correlation_3pt", "dyson_series",
]

_POLE_TOL = 1e-9


@dataclass(frozen=True)
class Momentum3:
    """Euclidean momentum split into the temporal component and the
    magnitude of the plate-parallel wavevector."""

    p0: float
    p_par: float

    def __post_init__(self):
        if self.p_par < 0.0:
            raise ValueError("p_par must be >= 0")


@dataclass(frozen=True)
class GreenValue:
    amplitude: complex
    kind: str

    def __post_init__(self):
        if self.kind not in ("free-transverse", "free-longitudinal",
                             "oscillator", "linear", "nonlinear", "slab"):
            raise ValueError(f"unknown Green kind {self.kind!r}")


def _check_pole(denominator, scale, what):
    if abs(denominator) < _POLE_TOL * max(scale, 1.0):
        raise PoleProximity(f"{what}: evaluation within {_POLE_TOL:g} of the pole")


def free_green(k, w, part="transverse"):
    """Free-field propagator amplitudes on the real axis.

    transverse: 1/(k^2 - w^2); longitudinal: -1/w^2 (direction factors
    k_a k_b / k^2 documented, not materialized); oscillator: the medium
    oscillator line 1/(w^2 - k^2 - i0+), where k plays the oscillator
    frequency.
    """
    if part == "transverse":
        den = k * k - w * w
        _check_pole(den, k * k + w * w, "free transverse")
        return GreenValue(1.0 / den, "free-transverse")
    if part == "longitudinal":
        _check_pole(w * w, w * w + 1.0, "free longitudinal")
        return GreenValue(-1.0 / (w * w), "free-longitudinal")
    if part == "oscillator":
        den = w * w - k * k
        _check_pole(den, k * k + w * w, "oscillator")
        return GreenValue(complex(1.0 / den), "oscillator")
    raise ValueError(f"unknown part {part!r}")


def linear_green(medium, k, xi, real_axis=False):
    """Transverse propagator in the medium.

    Imaginary axis (default): 1/(k^2 + xi^2 eps(i xi)), real and positive.
    ``real_axis=True`` evaluates 1/(k^2 - w^2 eps(w)) at w = xi instead.
    """
    if real_axis:
        den = k * k - xi * xi * permittivity(medium, xi)
        _check_pole(den, k * k + xi * xi, "linear green (real axis)")
        return GreenValue(1.0 / den, "linear")
    den = k * k + xi * xi * permittivity_imag_axis(medium, xi)
    return GreenValue(1.0 / den, "linear")


def nonlinear_green(medium, delta_total, k, xi):
    """Propagator with the additive nonlinear corrections included.

    ``delta_total`` is the summed correction at this xi (a number or a
    DeltaTable); must be nonnegative.  Reduces bit-for-bit to
    ``linear_green`` when the correction vanishes.
    """
    if hasattr(delta_total, "total"):
        delta_total = delta_total.total(xi)
    if delta_total < 0.0:
        raise NegativeDelta(f"correction {delta_total:.3e} violates positivity")
    den = k * k + xi * xi * (permittivity_imag_axis(medium, xi) + delta_total)
    return GreenValue(1.0 / den, "nonlinear")


def slab_kernel(q, h):
    """Plate-to-plate propagator e^(-h q)/(2 q) for q > 0, h >= 0."""
    if q <= 0.0:
        raise ValueError("slab kernel needs q > 0")
    if h < 0.0:
        raise ValueError("separation must be >= 0")
    return float(np.exp(-h * q) / (2.0 * q))


def correlation_em_p(medium, k, w):
    """Field-polarization cross correlator i w chi(w) G(k, w) on the real axis."""
    chi = permittivity(medium, w) - 1.0
    g = linear_green(medium, k, w, real_axis=True).amplitude
    return 1j * w * chi * g


def correlation_3pt(nu_2, nu_1, medium, w1, w2, k1, k2):
    """Three-point field-field-polarization correlator, reciprocal space:
    -w1 w2 chi2(w1, w2) G(k1, w1) G(k2, w2)."""
    if w1 == 0.0 or w2 == 0.0:
        return 0j
    c2 = chi2(nu_2, nu_1, w1, w2)
    g1 = linear_green(medium, k1, w1, real_axis=True).amplitude
    g2 = linear_green(medium, k2, w2, real_axis=True).amplitude
    return -w1 * w2 * c2 * g1 * g2


def dyson_series(g1, coupling, terms):
    """Partial sums of g1 * sum_m (coupling * g1)^m, the propagator
    correction series whose closed form is g1 / (1 - coupling g1)."""
    q = coupling * g1
    acc = 0.0
    power = 1.0
    for _ in range(terms):
        acc += power
        power *= q
    return g1 * acc

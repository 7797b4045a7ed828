"""Casimir observables for two perfect-conductor plates in a medium.

Everything is expressed through the Euclidean dispersion factor

    Q(p0, p) = sqrt(p^2 + p0^2 [eps(i p0) + sum_n Delta^(n)(i p0)])

and the transverse-momentum integral, which has the exact antiderivative

    integral_0^inf p dp Q/(e^{2Qh} - 1) = S(2 h c)/(8 h^3),
    c = Q(p0, 0),  S(y) = integral_y^inf x^2/(e^x - 1) dx,

for any permittivity (substitute u = Q, then integrate the Bose kernel
termwise; S is evaluated to machine precision through polylogarithms).
Only the p0 axis needs adaptive quadrature at T = 0; at T > 0 it becomes
the Matsubara sum with a half-weighted zero mode.  The same reduction
with L(y) = -integral_y^inf x ln(1 - e^{-x}) dx gives the energy.

Normalization: the temporal axis is folded to p0 >= 0 and doubled, which
is the unique convention under which the T -> 0 limit of the Matsubara
sum reproduces the T = 0 integral term by term; the classical limit is
then F -> -zeta(3) T_nat /(8 pi h^3) per polarization.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _backend as bk
from .dispersion import LorentzMedium, VACUUM, xi2_permittivity_imag_axis
from .errors import QuadratureFailure, SumNotConverged
from .quadrature import Axis, IntegrationSpec, integrate_1d

__all__ = [
    "PlateSystem", "ForceResult", "MatsubaraGrid",
    "q_factor", "matsubara_grid",
    "casimir_force_T0", "casimir_force_finite_T", "casimir_force",
    "casimir_energy_per_area",
]


@dataclass(frozen=True)
class PlateSystem:
    """Two perfect conductors a distance ``separation`` apart.

    ``temperature`` is the natural frequency k_B T/(hbar c) in the same
    inverse-length unit as ``separation``; 0 means the vacuum state.  The
    kelvin conversion lives at the CLI boundary.  ``delta_tables`` holds
    the nonlinear corrections (DeltaTable instances, already validated
    nonnegative).  ``polarizations`` counts the independent scalar modes:
    1 for a single Dirichlet mode, 2 for the electromagnetic TE+TM pair.
    """

    separation: float
    temperature: float = 0.0
    medium: LorentzMedium = VACUUM
    delta_tables: tuple = ()
    polarizations: int = 2

    def __post_init__(self):
        if not self.separation > 0.0:
            raise ValueError("separation must be positive")
        if self.temperature < 0.0:
            raise ValueError("temperature must be >= 0")
        if self.polarizations not in (1, 2):
            raise ValueError("polarizations must be 1 or 2")
        object.__setattr__(self, "delta_tables", tuple(self.delta_tables))
        for t in self.delta_tables:
            t.validate()


@dataclass(frozen=True)
class ForceResult:
    """Force per unit area (negative = attractive) with diagnostics."""

    force_per_area: float
    error_estimate: float
    matsubara_terms_used: int
    quadrature_evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise ValueError("error_estimate must be >= 0")


@dataclass(frozen=True)
class MatsubaraGrid:
    """Thermal frequencies xi_l = 2 pi T l with the half-weighted l = 0."""

    frequencies: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if f[0] != 0.0 or w[0] != 0.5 or np.any(np.diff(f) <= 0):
            raise ValueError("grid must start at a half-weighted zero mode "
                             "and increase strictly")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "weights", w)


def matsubara_grid(temperature, terms):
    """Frequencies 2 pi T l for l = 0..terms, zero mode at half weight."""
    if temperature <= 0.0:
        raise ValueError("matsubara_grid needs temperature > 0")
    if terms < 0:
        raise ValueError("terms must be >= 0")
    l = np.arange(terms + 1, dtype=np.float64)
    weights = np.ones_like(l)
    weights[0] = 0.5
    return MatsubaraGrid(2.0 * np.pi * temperature * l, weights)


def _xi2_material(system, xi):
    """xi^2 [eps(i xi) + sum Delta(i xi)], vectorized and finite at xi = 0.

    Adding an identically-zero table contributes an exact +0.0, so the
    nonlinear code path is bit-identical to the linear one in that case.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = xi2_permittivity_imag_axis(system.medium, xi)
    out = np.atleast_1d(out)
    for table in system.delta_tables:
        out = out + xi * xi * table.total(xi)
    return out


def q_factor(system, p0, p_par):
    """Euclidean dispersion factor sqrt(p_par^2 + p0^2 [eps + sum Delta])."""
    if p0 < 0.0 or p_par < 0.0:
        raise ValueError("momentum components must be >= 0")
    m2 = float(_xi2_material(system, p0)[0])
    return float(np.sqrt(p_par * p_par + m2))


def _p0_scale(system):
    """Decay scale of the p0 integrand, ~1/(2h) corrected for the medium."""
    eps_inf = system.medium.background
    return 1.0 / (2.0 * system.separation * np.sqrt(eps_inf))


def casimir_force_T0(system, rel_tol=1e-8, max_evaluations=200_000):
    """Zero-temperature force per unit area (negative, attractive).

    F = -(pol / 2 pi^2) (1/8h^3) integral_0^inf S(2 h Q(p0, 0)) dp0,
    with the transverse integral folded into S exactly.
    """
    h = system.separation

    def integrand(p0):
        c = np.sqrt(_xi2_material(system, p0))
        return bk.bose_tail_force(2.0 * h * c)

    spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=_p0_scale(system)),),
                           rel_tol=rel_tol, abs_tol=0.0,
                           max_evaluations=max_evaluations)
    est = integrate_1d(integrand, spec)
    if not est.converged:
        raise QuadratureFailure(
            f"T=0 force integral not converged: error {est.error_estimate:.3e} "
            f"after {est.evaluations} evaluations")
    pref = system.polarizations / (16.0 * np.pi ** 2 * h ** 3)
    return ForceResult(-pref * est.value, pref * est.error_estimate,
                       0, est.evaluations)


def casimir_force_finite_T(system, rel_tol=1e-8, max_terms=100_000):
    """Finite-temperature force per unit area.

    F = -(pol T / pi) (1/8h^3) sum'_l S(2 h Q(xi_l, 0)), xi_l = 2 pi T l,
    the zero mode at half weight.  The sum stops when the geometric tail
    estimate drops below rel_tol times the running total; SumNotConverged
    reports the tail if max_terms is hit first.
    """
    if system.temperature <= 0.0:
        raise ValueError("finite-T force needs temperature > 0; "
                         "use casimir_force_T0 for the vacuum state")
    h = system.separation
    T = system.temperature
    dxi = 2.0 * np.pi * T
    block = 64
    total = 0.0
    l = 0
    tail = np.inf
    while l <= max_terms:
        ls = np.arange(l, min(l + block, max_terms + 1))
        xi = dxi * ls
        c = np.sqrt(_xi2_material(system, xi))
        s_vals = bk.bose_tail_force(2.0 * h * c)
        if ls[0] == 0:
            s_vals[0] *= 0.5
        total += float(np.sum(s_vals))
        l = int(ls[-1]) + 1
        term = float(s_vals[-1])
        if term == 0.0:
            tail = 0.0
            break
        # terms decay log-convexly, so the last in-block ratio bounds the tail
        prev = float(s_vals[-2]) if s_vals.size > 1 else np.inf
        ratio = min(term / prev if prev > 0.0 else 0.999, 0.999)
        tail = term * ratio / (1.0 - ratio)
        if tail <= rel_tol * total:
            break
    pref = system.polarizations * T / (8.0 * np.pi * h ** 3)
    if tail > rel_tol * total:
        raise SumNotConverged(
            f"Matsubara sum not converged after {l} terms "
            f"(tail estimate {pref * tail:.3e})",
            terms_used=l, tail_estimate=pref * tail)
    return ForceResult(-pref * total, pref * (tail + rel_tol * total), l, l)


def casimir_force(system, rel_tol=1e-8, max_terms=100_000,
                  max_evaluations=200_000):
    """Dispatch on the system temperature."""
    if system.temperature > 0.0:
        return casimir_force_finite_T(system, rel_tol, max_terms)
    return casimir_force_T0(system, rel_tol, max_evaluations)


def casimir_energy_per_area(system, rel_tol=1e-8, max_evaluations=200_000,
                            max_terms=100_000):
    """Interaction (free) energy per unit area, <= 0; -dE/dh is the force.

    T = 0: E = -(pol / 8 pi^2 h^2) integral_0^inf L(2 h Q(p0, 0)) dp0 / 2.
    T > 0: E = -(pol T / 8 pi h^2) sum'_l L(2 h Q(xi_l, 0)).
    """
    h = system.separation
    if system.temperature > 0.0:
        T = system.temperature
        dxi = 2.0 * np.pi * T
        total = 0.0
        l = 0
        block = 64
        while l <= max_terms:
            ls = np.arange(l, min(l + block, max_terms + 1))
            xi = dxi * ls
            c = np.sqrt(_xi2_material(system, xi))
            vals = bk.bose_tail_energy(2.0 * h * c)
            if ls[0] == 0:
                vals[0] *= 0.5
            total += float(np.sum(vals))
            l = int(ls[-1]) + 1
            term = float(vals[-1])
            if term == 0.0:
                break
            prev = float(vals[-2]) if vals.size > 1 else np.inf
            ratio = min(term / prev if prev > 0.0 else 0.999, 0.999)
            if term * ratio / (1.0 - ratio) <= rel_tol * total:
                break
        return -system.polarizations * T / (8.0 * np.pi * h * h) * total

    def integrand(p0):
        c = np.sqrt(_xi2_material(system, p0))
        return bk.bose_tail_energy(2.0 * h * c)

    spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=_p0_scale(system)),),
                           rel_tol=rel_tol, abs_tol=0.0,
                           max_evaluations=max_evaluations)
    est = integrate_1d(integrand, spec)
    if not est.converged:
        raise QuadratureFailure(
            f"energy integral not converged: error {est.error_estimate:.3e}")
    return -system.polarizations / (16.0 * np.pi ** 2 * h * h) * est.value

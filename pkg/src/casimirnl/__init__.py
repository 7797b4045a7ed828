"""Casimir forces between conducting plates in dispersive, absorbing,
nonlinear dielectric media, at zero and finite temperature."""

from ._backend import BACKEND
from .coupling import (
    NonlinearKernel,
    SusceptibilityKernel,
    chi2,
    chi_n_from_couplings,
    chi_n_time_domain,
    coupling_n_from_im_chi,
    im_chi_n,
)
from .dispersion import (
    VACUUM,
    LorentzMedium,
    LorentzOscillator,
    chi_from_coupling,
    chi_time_domain,
    coupling_from_im_chi,
    default_grid,
    kk_residual,
    linear_coupling,
    permittivity,
    permittivity_imag_axis,
)
from .force import (
    ForceResult,
    MatsubaraGrid,
    PlateSystem,
    casimir_energy_per_area,
    casimir_force,
    casimir_force_T0,
    casimir_force_finite_T,
    matsubara_grid,
    q_factor,
)
from .greens import (
    correlation_3pt,
    correlation_em_p,
    free_green,
    linear_green,
    nonlinear_green,
    slab_kernel,
)
from .nonlinear import (
    DeltaTable,
    NonlinearCorrection,
    build_delta_table,
    delta2_imag_axis,
    delta3_imag_axis,
    delta_from_im_chi,
    delta_n_imag_axis,
)
from .quadrature import (
    Axis,
    IntegralEstimate,
    IntegrationSpec,
    integrate_1d,
    integrate_mc,
    integrate_nd,
)
from .spectral import SpectralFunction

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    # spectra and media
    "SpectralFunction", "LorentzOscillator", "LorentzMedium", "VACUUM",
    "permittivity", "permittivity_imag_axis", "default_grid",
    "coupling_from_im_chi", "linear_coupling", "chi_from_coupling",
    "chi_time_domain", "kk_residual",
    # nonlinear response algebra
    "NonlinearKernel", "SusceptibilityKernel", "chi_n_from_couplings",
    "chi2", "chi_n_time_domain", "im_chi_n", "coupling_n_from_im_chi",
    # propagator corrections
    "NonlinearCorrection", "DeltaTable", "delta2_imag_axis",
    "delta3_imag_axis", "delta_n_imag_axis", "delta_from_im_chi",
    "build_delta_table",
    # propagators
    "free_green", "linear_green", "nonlinear_green", "slab_kernel",
    "correlation_em_p", "correlation_3pt",
    # observables
    "PlateSystem", "ForceResult", "MatsubaraGrid", "q_factor",
    "matsubara_grid", "casimir_force", "casimir_force_T0",
    "casimir_force_finite_T", "casimir_energy_per_area",
    # integration engine
    "Axis", "IntegrationSpec", "IntegralEstimate",
    "integrate_1d", "integrate_nd", "integrate_mc",
]

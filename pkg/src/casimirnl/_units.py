"""Physical constants and the natural-unit <-> SI boundary.

All internal computation uses hbar = c = 1 with frequencies measured in
inverse micrometers.  Only the CLI converts kelvin and micrometers in, and
pascal / J m^-2 out, through the factors below.  Constants are CODATA /
exact-SI values and are echoed into every output file's metadata block.
"""

import math

# exact SI defining constants (2019 redefinition)
PLANCK_H = 6.62607015e-34        # J s
HBAR = PLANCK_H / (2.0 * math.pi)  # J s
C_LIGHT = 299792458.0            # m/s
K_BOLTZMANN = 1.380649e-23       # J/K

#: natural temperature k_B T / (hbar c) per kelvin, in 1/m
THETA_PER_KELVIN_M = K_BOLTZMANN / (HBAR * C_LIGHT)

#: same, in 1/um (the working frequency unit)
THETA_PER_KELVIN_UM = THETA_PER_KELVIN_M * 1e-6


def temperature_to_natural(t_kelvin: float) -> float:
    """Kelvin -> natural frequency k_B T/(hbar c) in 1/um."""
    return t_kelvin * THETA_PER_KELVIN_UM


def pressure_to_pascal(force_natural: float) -> float:
    """Force per unit area in um^-4 -> Pa (multiply by hbar c)."""
    return force_natural * 1e24 * HBAR * C_LIGHT


def energy_area_to_si(energy_natural: float) -> float:
    """Energy per unit area in um^-3 -> J/m^2."""
    return energy_natural * 1e18 * HBAR * C_LIGHT


def constants_metadata() -> dict:
    """Constant values echoed into CSV/JSON output headers."""
    return {
        "hbar_J_s": HBAR,
        "c_m_per_s": C_LIGHT,
        "k_B_J_per_K": K_BOLTZMANN,
    }

"""Physical constants and material data used across the package.

All quantities are SI. Atomic data are for rubidium-87, the default
species of every shipped example configuration.
"""

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import hbar as HBAR

# Rubidium-87
RB87_MASS_KG = 1.44316060e-25
RB87_A_S_M = 4.76e-9                  # s-wave scattering length
RB87_D2_WAVELENGTH_M = 780.241e-9
RB87_D2_DIPOLE_CM = 3.584e-29         # reduced dipole moment, C*m

#: Resonant wavenumber of the Rb-87 D2 line, 1/m.
RB87_D2_WAVENUMBER = 2.0 * np.pi / RB87_D2_WAVELENGTH_M

# Sellmeier coefficients for fused silica (Malitson), lambda in micrometres.
_SELLMEIER_B = (0.6961663, 0.4079426, 0.8974794)
_SELLMEIER_C_UM2 = (0.0684043**2, 0.1162414**2, 9.896161**2)


def sellmeier_fused_silica(wavelength_m: float) -> float:
    """Refractive index of fused silica at the given vacuum wavelength.

    Valid roughly over 0.21-3.7 um. Used to fill in the fiber core index
    when a configuration does not pin it explicitly.
    """
    lam2 = (wavelength_m * 1e6) ** 2
    n2 = 1.0
    for b, c in zip(_SELLMEIER_B, _SELLMEIER_C_UM2):
        n2 += b * lam2 / (lam2 - c)
    return float(np.sqrt(n2))


__all__ = [
    "C_LIGHT",
    "EPS0",
    "HBAR",
    "RB87_MASS_KG",
    "RB87_A_S_M",
    "RB87_D2_WAVELENGTH_M",
    "RB87_D2_DIPOLE_CM",
    "RB87_D2_WAVENUMBER",
    "sellmeier_fused_silica",
]

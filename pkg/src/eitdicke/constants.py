"""Physical constants and unit conversions. SI units throughout.

CODATA values; atomic masses in unified atomic mass units.
"""

import math
from typing import Final

K_B: Final[float] = 1.380649e-23        # Boltzmann constant [J/K]
ATOMIC_MASS: Final[float] = 1.66054e-27  # unified atomic mass unit [kg]
TORR: Final[float] = 133.322             # [Pa]

TWO_PI: Final[float] = 2.0 * math.pi

# Gaussian FWHM = GAUSSIAN_FWHM_FACTOR * (1/e half-width sigma)
GAUSSIAN_FWHM_FACTOR: Final[float] = 2.0 * math.sqrt(2.0 * math.log(2.0))

RB87_MASS: Final[float] = 86.909 * ATOMIC_MASS  # [kg]
NE_MASS: Final[float] = 20.18 * ATOMIC_MASS     # [kg]


def torr_to_pa(p_torr: float) -> float:
    return p_torr * TORR


def celsius_to_kelvin(t_c: float) -> float:
    return t_c + 273.15


def hz_to_angular(f_hz: float) -> float:
    """Ordinary frequency [Hz] to angular frequency [rad/s]."""
    return TWO_PI * f_hz


def angular_to_hz(omega: float) -> float:
    """Angular frequency [rad/s] to ordinary frequency [Hz]."""
    return omega / TWO_PI

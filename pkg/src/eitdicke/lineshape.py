"""Dicke-narrowed EIT lineshape for a degenerate pump-probe pair at a
small relative angle.

The two-photon resonance of a buffer-gas cell is a Lorentzian whose
half-width carries, on top of the ground-state decoherence rate, a
collision-narrowed residual-Doppler contribution quadratic in the
pump-probe angle: (2*pi*L/lambda) * Gamma_D * theta^2, with L the mean
free path and Gamma_D = q*v_th the one-photon Doppler width.  All
angular frequencies are rad/s internally.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import GAUSSIAN_FWHM_FACTOR, TWO_PI
from .kinetics import BallisticMediumError, KineticsReport

__all__ = [
    "ValidityWarning",
    "EitParams",
    "BeamGeometry",
    "Spectrum",
    "SPECTRUM_KINDS",
    "residual_doppler_width",
    "gaussian_fwhm",
    "narrowing_factor",
    "excess_hwhm",
    "s2_lineshape",
    "peak_amplitude_ratio",
    "theoretical_fwhm",
]

# Above this narrowing factor the collision-narrowed expansion of the
# lineshape starts to degrade toward the ballistic regime.
DICKE_VALIDITY_LIMIT = 0.2

SPECTRUM_KINDS = ("absorption", "transmission", "correlation-derived")


class ValidityWarning(UserWarning):
    """A model assumption (low power broadening, small narrowing factor)
    is violated; results may be inaccurate but are still computed."""


@dataclass(frozen=True)
class EitParams:
    """Optical and ground-state rates of the EIT system.

    gamma_opt    optical decoherence rate [rad/s]
    gamma_12     ground-state decoherence rate [rad/s]
    rabi_pump    pump Rabi frequency [rad/s]
    light_shift  additive displacement of the line center [rad/s]
    """

    gamma_opt: float
    gamma_12: float = 0.0
    rabi_pump: float = 0.0
    light_shift: float = 0.0

    def __post_init__(self):
        if not self.gamma_opt > 0.0:
            raise ValueError(f"gamma_opt must be > 0, got {self.gamma_opt}")
        if self.gamma_12 < 0.0:
            raise ValueError(f"gamma_12 must be >= 0, got {self.gamma_12}")
        if self.rabi_pump < 0.0:
            raise ValueError(f"rabi_pump must be >= 0, got {self.rabi_pump}")
        if self.rabi_pump**2 / self.gamma_opt > self.gamma_12:
            warnings.warn(
                "pump power broadening rabi_pump^2/gamma_opt exceeds gamma_12; "
                "the low-power-broadening lineshape model is outside its regime",
                ValidityWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class BeamGeometry:
    """Degenerate pump-probe geometry: equal wavenumbers q = 2*pi/wavelength,
    relative angle theta, so |q1 - q2| = q*theta."""

    angle: float       # [rad], small-angle regime
    wavelength: float  # [m]

    def __post_init__(self):
        if not 0.0 <= self.angle <= 0.01:
            raise ValueError(f"angle must be in [0, 0.01] rad, got {self.angle}")
        if not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def delta_q(self) -> float:
        """Wave-vector difference |q1 - q2| = q*theta [rad/m]."""
        return TWO_PI / self.wavelength * self.angle


@dataclass(frozen=True)
class Spectrum:
    """Real-valued spectrum on a strictly increasing detuning grid [rad/s]."""

    detuning: np.ndarray
    values: np.ndarray
    kind: str = "absorption"

    def __post_init__(self):
        det = np.asarray(self.detuning, dtype=float)
        val = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "detuning", det)
        object.__setattr__(self, "values", val)
        if det.ndim != 1 or val.ndim != 1 or det.shape != val.shape:
            raise ValueError("detuning and values must be 1-D arrays of equal length")
        if det.size == 0:
            raise ValueError("spectrum must not be empty")
        if not np.all(np.diff(det) > 0.0):
            raise ValueError("detuning grid must be strictly increasing")
        if not np.all(np.isfinite(val)):
            raise ValueError("spectrum values must be finite")
        if self.kind not in SPECTRUM_KINDS:
            raise ValueError(f"kind must be one of {SPECTRUM_KINDS}, got {self.kind!r}")

    def __len__(self) -> int:
        return self.detuning.size


def residual_doppler_width(geom: BeamGeometry, v_th: float) -> float:
    """Residual two-photon Doppler width |q1 - q2| * v_th = (2*pi/lambda)*theta*v_th [rad/s]."""
    return geom.delta_q * v_th


def gaussian_fwhm(sigma: float) -> float:
    """FWHM of a Gaussian line with 1/e half-width sigma: 2*sqrt(2*ln2)*sigma."""
    return GAUSSIAN_FWHM_FACTOR * sigma


def narrowing_factor(geom: BeamGeometry, kin: KineticsReport) -> float:
    """Collisional narrowing factor, residual Doppler width over collision rate.

    Algebraically equals 2*pi*theta*L/lambda.  Much less than one means
    the residual Doppler broadening is strongly suppressed.
    """
    if kin.collision_rate == 0.0:
        raise BallisticMediumError(
            "collision rate is zero: no collisional narrowing in a ballistic medium"
        )
    return residual_doppler_width(geom, kin.v_th) / kin.collision_rate


def _excess_coefficient(geom: BeamGeometry, kin: KineticsReport) -> float:
    """(pi*L/lambda) * Gamma_D * theta^2, the building block of the
    angle-dependent terms of the lineshape [rad/s]."""
    return (
        math.pi * kin.mean_free_path / geom.wavelength
        * kin.doppler_width * geom.angle**2
    )


def excess_hwhm(geom: BeamGeometry, kin: KineticsReport) -> float:
    """Angle-induced excess half-width (2*pi*L/lambda)*Gamma_D*theta^2 [rad/s].

    This is the narrowed residual-Doppler contribution added to gamma_12
    in the Lorentzian half-width; it is quadratic in the angle.
    """
    return 2.0 * _excess_coefficient(geom, kin)


def _warn_if_outside_dicke(geom: BeamGeometry, kin: KineticsReport) -> None:
    if kin.collision_rate > 0.0:
        eta = residual_doppler_width(geom, kin.v_th) / kin.collision_rate
        if eta > DICKE_VALIDITY_LIMIT:
            warnings.warn(
                f"narrowing factor {eta:.3g} exceeds {DICKE_VALIDITY_LIMIT}; the "
                "collision-narrowed lineshape degrades toward the ballistic regime",
                ValidityWarning,
                stacklevel=3,
            )


def s2_lineshape(
    detuning, geom: BeamGeometry, eit: EitParams, kin: KineticsReport
) -> Spectrum:
    """Two-photon absorption spectrum vs Raman detuning [rad/s].

    A negative-signed Lorentzian centered on the light shift with
    half-width gamma_12 + (2*pi*L/lambda)*Gamma_D*theta^2; the overall
    scale carries |rabi_pump|^2 and the angle-broadened optical rate.

    This is the degenerate small-angle reduction of the general
    collision-narrowed form, in which the optical rate is broadened by
    q1.(q1 - q2) v_th^2 / collision_rate and the Lorentzian half-width by
    (|q1 - q2| v_th)^2 / collision_rate; only the degenerate |q1| = |q2|
    case at relative angle theta is exposed as an operation.
    """
    grid = np.asarray(detuning, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid must not be empty")
    if not np.all(np.diff(grid) > 0.0):
        raise ValueError("detuning grid must be strictly increasing")
    _warn_if_outside_dicke(geom, kin)
    c = _excess_coefficient(geom, kin)
    scale = -abs(eit.rabi_pump) ** 2 / (eit.gamma_opt + c) ** 2
    w = eit.gamma_12 + 2.0 * c
    d = grid - eit.light_shift
    values = scale * w / (d**2 + w**2)
    return Spectrum(detuning=grid, values=values, kind="absorption")


def peak_amplitude_ratio(geom: BeamGeometry, eit: EitParams, kin: KineticsReport) -> float:
    """Line-center amplitude relative to perfect alignment.

    [gamma_opt/(gamma_opt + (pi*L/lambda)*Gamma_D*theta^2)]^2
      * gamma_12/(gamma_12 + (2*pi*L/lambda)*Gamma_D*theta^2);
    equals 1 at theta = 0 and decreases monotonically with the angle.
    """
    if not eit.gamma_12 > 0.0:
        raise ValueError("peak_amplitude_ratio requires gamma_12 > 0")
    c = _excess_coefficient(geom, kin)
    return (eit.gamma_opt / (eit.gamma_opt + c)) ** 2 * eit.gamma_12 / (eit.gamma_12 + 2.0 * c)


def theoretical_fwhm(geom: BeamGeometry, eit: EitParams, kin: KineticsReport) -> float:
    """Full width at half maximum of the resonance, 2*(gamma_12 + excess_hwhm) [rad/s]."""
    _warn_if_outside_dicke(geom, kin)
    return 2.0 * (eit.gamma_12 + excess_hwhm(geom, kin))

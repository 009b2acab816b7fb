"""Buffer-gas collision kinetics for a hot-vapor cell.

Hard-sphere kinetic theory for an active (optically probed) species
diluted in an inert buffer gas: thermal velocities, kinetic collision
rate, mean free path, and the one-photon Doppler width.
"""

import math
from dataclasses import dataclass

from .constants import K_B, NE_MASS, RB87_MASS, TORR, TWO_PI

__all__ = [
    "BallisticMediumError",
    "Species",
    "MediumParams",
    "KineticsReport",
    "thermal_velocity_1d",
    "mean_relative_speed",
    "buffer_density",
    "collision_rate",
    "mean_free_path",
    "kinetics_report",
    "in_dicke_regime",
    "rb87_neon_cell",
]


class BallisticMediumError(ValueError):
    """Raised when a collision-dominated quantity is requested for a
    medium with zero collision rate (ballistic, infinite mean free path)."""


@dataclass(frozen=True)
class Species:
    """An atomic species entering the kinetics."""

    name: str
    mass: float  # [kg]

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError(f"Species.mass must be > 0, got {self.mass}")


@dataclass(frozen=True)
class MediumParams:
    """Vapor-cell medium: active species in a buffer gas.

    temperature        cell temperature [K]
    buffer_pressure    buffer-gas pressure [Pa]
    active             optically probed species
    buffer             buffer-gas species
    hard_sphere_radius effective hard-sphere radius of an active-buffer pair [m]
    optical_wavelength optical transition wavelength [m]
    """

    temperature: float
    buffer_pressure: float
    active: Species
    buffer: Species
    hard_sphere_radius: float
    optical_wavelength: float

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if self.buffer_pressure < 0.0:
            raise ValueError(f"buffer_pressure must be >= 0, got {self.buffer_pressure}")
        if not self.hard_sphere_radius > 0.0:
            raise ValueError(f"hard_sphere_radius must be > 0, got {self.hard_sphere_radius}")
        if not self.optical_wavelength > 0.0:
            raise ValueError(f"optical_wavelength must be > 0, got {self.optical_wavelength}")


@dataclass(frozen=True)
class KineticsReport:
    """Derived kinetic quantities for a medium.

    v_th            1-D rms thermal velocity of the active species [m/s]
    v_rel           mean relative active-buffer speed [m/s]
    buffer_density  buffer number density [1/m^3]
    collision_rate  kinetic collision rate of the active species [1/s]
    mean_free_path  active-species mean free path [m]
    doppler_width   one-photon Doppler width q*v_th [rad/s]
    """

    v_th: float
    v_rel: float
    buffer_density: float
    collision_rate: float
    mean_free_path: float
    doppler_width: float


def thermal_velocity_1d(temperature: float, mass: float) -> float:
    """1-D rms thermal velocity sqrt(kB*T/m) [m/s]."""
    if not mass > 0.0:
        raise ValueError(f"mass must be > 0, got {mass}")
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    return math.sqrt(K_B * temperature / mass)


def mean_relative_speed(temperature: float, m1: float, m2: float) -> float:
    """Maxwell mean relative speed sqrt(8*kB*T/(pi*mu)), mu the reduced mass [m/s]."""
    if not (m1 > 0.0 and m2 > 0.0):
        raise ValueError(f"masses must be > 0, got {m1}, {m2}")
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    mu = m1 * m2 / (m1 + m2)
    return math.sqrt(8.0 * K_B * temperature / (math.pi * mu))


def buffer_density(medium: MediumParams) -> float:
    """Ideal-gas buffer number density p/(kB*T) [1/m^3]."""
    return medium.buffer_pressure / (K_B * medium.temperature)


def collision_rate(medium: MediumParams) -> float:
    """Hard-sphere kinetic collision rate n * pi*R^2 * v_rel [1/s]."""
    sigma = math.pi * medium.hard_sphere_radius**2
    v_rel = mean_relative_speed(medium.temperature, medium.active.mass, medium.buffer.mass)
    return buffer_density(medium) * sigma * v_rel


def mean_free_path(medium: MediumParams) -> float:
    """Mean free path of the active species, v_th / collision_rate [m].

    Raises BallisticMediumError at zero buffer pressure (no collisions,
    the path is unbounded) rather than dividing by zero.
    """
    rate = collision_rate(medium)
    if rate == 0.0:
        raise BallisticMediumError(
            "collision rate is zero (ballistic medium): mean free path is unbounded"
        )
    return thermal_velocity_1d(medium.temperature, medium.active.mass) / rate


def kinetics_report(medium: MediumParams) -> KineticsReport:
    """Aggregate all kinetic quantities for a medium.

    By construction mean_free_path * collision_rate == v_th exactly and
    doppler_width == 2*pi*v_th/optical_wavelength.
    """
    v_th = thermal_velocity_1d(medium.temperature, medium.active.mass)
    v_rel = mean_relative_speed(medium.temperature, medium.active.mass, medium.buffer.mass)
    rate = collision_rate(medium)
    return KineticsReport(
        v_th=v_th,
        v_rel=v_rel,
        buffer_density=buffer_density(medium),
        collision_rate=rate,
        mean_free_path=mean_free_path(medium),
        doppler_width=TWO_PI * v_th / medium.optical_wavelength,
    )


def in_dicke_regime(medium: MediumParams, theta: float) -> bool:
    """Check lambda < L < lambda/theta, the window where the two-photon
    grating is collision-narrowed while the optical line stays Doppler
    broadened."""
    if not theta > 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    path = mean_free_path(medium)
    lam = medium.optical_wavelength
    return lam < path < lam / theta


def rb87_neon_cell(
    temperature: float = 273.15 + 52.0,
    buffer_pressure: float = 10.0 * TORR,
    hard_sphere_radius: float = 0.35e-9,
    optical_wavelength: float = 795e-9,
) -> MediumParams:
    """Rb-87 in neon buffer gas; defaults match a 52 C cell with 10 Torr Ne
    probed on the D1 line."""
    return MediumParams(
        temperature=temperature,
        buffer_pressure=buffer_pressure,
        active=Species("Rb-87", RB87_MASS),
        buffer=Species("Ne", NE_MASS),
        hard_sphere_radius=hard_sphere_radius,
        optical_wavelength=optical_wavelength,
    )

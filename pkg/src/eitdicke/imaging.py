"""Single-shot imaging of a probe beam through the EIT medium.

A divergent probe maps radius to pump-probe angle, theta(r) proportional
to r, so the angle-dependent transparency imprints on the transmitted
beam profile; a collimated probe (theta = 0 everywhere) passes with its
shape unchanged.  The cell is treated as thin: one multiplicative
transmission per ray.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kinetics import KineticsReport
from .lineshape import BeamGeometry, EitParams, peak_amplitude_ratio

__all__ = [
    "RadialProfile",
    "ImagingConfig",
    "theta_profile",
    "input_profile",
    "transmitted_profile",
    "second_moment_width",
    "relative_transparency_curve",
    "with_image_noise",
]

# Radial grid extent in waist radii.
GRID_EXTENT = 3.0

# Samples of the off-resonance image below this fraction of its peak are
# dropped from the recovered transparency curve.
DIVISION_GUARD = 1e-6


@dataclass(frozen=True)
class RadialProfile:
    """Azimuthally averaged beam intensity vs radius."""

    radii: np.ndarray
    intensity: np.ndarray
    label: str = ""

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        i = np.asarray(self.intensity, dtype=float)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "intensity", i)
        if r.ndim != 1 or r.shape != i.shape:
            raise ValueError("radii and intensity must be 1-D arrays of equal length")
        if r.size < 2 or r[0] != 0.0 or not np.all(np.diff(r) > 0.0):
            raise ValueError("radii must increase strictly from 0")
        if not np.all(np.isfinite(i)) or np.any(i < 0.0):
            raise ValueError("intensity must be finite and non-negative")

    def __len__(self) -> int:
        return self.radii.size


@dataclass(frozen=True)
class ImagingConfig:
    """Probe geometry and transmission parametrization.

    waist_radius             probe waist radius w0 [m]
    theta_max                pump-probe angle at r = w0 [rad]; 0 = collimated
    background_transmission  off-resonance intensity transmission
    eit_contrast             added transparency at line center, theta = 0
    n_radii                  radial grid size over [0, 3*w0]

    Note the radial grid reaches 3*w0, so theta(r) reaches 3*theta_max;
    the small-angle lineshape requires 3*theta_max <= 10 mrad.
    """

    waist_radius: float
    theta_max: float = 0.0
    background_transmission: float = 0.5
    eit_contrast: float = 0.3
    n_radii: int = 512

    def __post_init__(self):
        if not self.waist_radius > 0.0:
            raise ValueError(f"waist_radius must be > 0, got {self.waist_radius}")
        if self.theta_max < 0.0:
            raise ValueError(f"theta_max must be >= 0, got {self.theta_max}")
        if not 0.0 < self.background_transmission <= 1.0:
            raise ValueError(
                f"background_transmission must be in (0, 1], got {self.background_transmission}"
            )
        if not 0.0 <= self.eit_contrast <= 1.0 - self.background_transmission:
            raise ValueError(
                f"eit_contrast must be in [0, 1 - background_transmission], "
                f"got {self.eit_contrast}"
            )
        if self.n_radii < 16:
            raise ValueError(f"n_radii must be >= 16, got {self.n_radii}")


def theta_profile(r, cfg: ImagingConfig):
    """Pump-probe angle at radius r: theta_max * r / waist_radius [rad]."""
    return cfg.theta_max * np.asarray(r, dtype=float) / cfg.waist_radius


def input_profile(cfg: ImagingConfig) -> RadialProfile:
    """Unit-peak Gaussian beam cross-section exp(-2 r^2 / w0^2) on [0, 3*w0]."""
    radii = np.linspace(0.0, GRID_EXTENT * cfg.waist_radius, cfg.n_radii)
    intensity = np.exp(-2.0 * (radii / cfg.waist_radius) ** 2)
    return RadialProfile(radii=radii, intensity=intensity, label="input")


def transmitted_profile(
    inp: RadialProfile,
    cfg: ImagingConfig,
    eit: EitParams,
    kin: KineticsReport,
    mode: str,
) -> RadialProfile:
    """Beam profile after the cell.

    mode="off_resonance": uniform background transmission, independent of
    angle.  mode="eit_resonance": per-radius transmission
    background_transmission + eit_contrast * peak_amplitude_ratio(theta(r)),
    evaluated at line center.  The optical wavelength is recovered from
    the kinetics report (doppler_width = 2*pi*v_th/wavelength).
    """
    if mode == "off_resonance":
        return RadialProfile(
            radii=inp.radii,
            intensity=cfg.background_transmission * inp.intensity,
            label="off_resonance",
        )
    if mode != "eit_resonance":
        raise ValueError(f"mode must be 'off_resonance' or 'eit_resonance', got {mode!r}")
    if not kin.doppler_width > 0.0:
        raise ValueError("kinetics report has zero doppler_width; wavelength undefined")
    wavelength = 2.0 * np.pi * kin.v_th / kin.doppler_width
    thetas = theta_profile(inp.radii, cfg)
    ratios = np.array(
        [peak_amplitude_ratio(BeamGeometry(t, wavelength), eit, kin) for t in thetas]
    )
    transmission = cfg.background_transmission + cfg.eit_contrast * ratios
    return RadialProfile(
        radii=inp.radii, intensity=transmission * inp.intensity, label="eit_resonance"
    )


def second_moment_width(p: RadialProfile) -> float:
    """Radial second-moment size sqrt(int I r^2 r dr / int I r dr) [m].

    Area-weighted (2-D) moment of the azimuthally averaged profile,
    by trapezoidal quadrature.
    """
    power = np.trapezoid(p.intensity * p.radii, p.radii)
    if power <= 0.0:
        raise ValueError("profile carries no power; width undefined")
    second = np.trapezoid(p.intensity * p.radii**3, p.radii)
    return math.sqrt(second / power)


def relative_transparency_curve(
    eit_img: RadialProfile, off_img: RadialProfile, cfg: ImagingConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Recover the amplitude-ratio curve from a pair of images.

    The quotient eit/off of the transmitted images, rescaled by the
    known background transmission, is the absolute EIT transmission
    T(r); the imaging estimate of peak_amplitude_ratio(theta(r)) is then
    (T(r) - background_transmission) / eit_contrast.  Radii where the
    off-resonance image falls below 1e-6 of its peak are dropped.
    """
    if not np.array_equal(eit_img.radii, off_img.radii):
        raise ValueError("images must share the same radial grid")
    if not cfg.eit_contrast > 0.0:
        raise ValueError("relative transparency requires eit_contrast > 0")
    keep = off_img.intensity > DIVISION_GUARD * float(np.max(off_img.intensity))
    radii = eit_img.radii[keep]
    transmission = (
        cfg.background_transmission * eit_img.intensity[keep] / off_img.intensity[keep]
    )
    ratio = (transmission - cfg.background_transmission) / cfg.eit_contrast
    return theta_profile(radii, cfg), ratio


def with_image_noise(p: RadialProfile, noise: float, seed: int) -> RadialProfile:
    """Apply multiplicative pixel noise as seen by an azimuthal average.

    Models per-pixel Gaussian noise of fractional amplitude `noise` on the
    underlying 2-D image: a radial sample at r averages the annulus of
    ~2*pi*r/dr pixels, so its residual noise is noise/sqrt(n_pixels).
    Negative samples are clipped at zero.
    """
    if noise < 0.0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    dr = p.radii[1] - p.radii[0]
    n_pixels = np.maximum(1.0, np.round(2.0 * np.pi * p.radii / dr))
    sigma = noise / np.sqrt(n_pixels)
    noisy = p.intensity * (1.0 + sigma * rng.standard_normal(p.radii.size))
    return RadialProfile(
        radii=p.radii, intensity=np.maximum(noisy, 0.0), label=p.label
    )

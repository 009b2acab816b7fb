"""Dicke-narrowed EIT resonances under pump-probe angular deviation.

Closed-form lineshape model, buffer-gas collision kinetics, a
Monte-Carlo velocity-changing-collision oracle, Lorentzian fitting, and
a beam-imaging simulator, with a CSV-emitting command-line harness.
"""

from .analysis import (
    DegenerateDataError,
    LorentzianFit,
    PeakShapeError,
    PowerLawFit,
    fit_lorentzian,
    numeric_fwhm,
    power_law_exponent,
)
from .imaging import (
    ImagingConfig,
    RadialProfile,
    input_profile,
    relative_transparency_curve,
    second_moment_width,
    theta_profile,
    transmitted_profile,
    with_image_noise,
)
from .kinetics import (
    BallisticMediumError,
    KineticsReport,
    MediumParams,
    Species,
    buffer_density,
    collision_rate,
    in_dicke_regime,
    kinetics_report,
    mean_free_path,
    mean_relative_speed,
    rb87_neon_cell,
    thermal_velocity_1d,
)
from .lineshape import (
    BeamGeometry,
    EitParams,
    Spectrum,
    ValidityWarning,
    excess_hwhm,
    gaussian_fwhm,
    narrowing_factor,
    peak_amplitude_ratio,
    residual_doppler_width,
    s2_lineshape,
    theoretical_fwhm,
)
from .montecarlo import (
    CorrelationTrace,
    McConfig,
    ResourceBudgetError,
    ballistic_reference,
    default_t_max,
    simulate_correlation,
    simulate_correlation_grouped,
    spectrum_from_correlation,
)

__version__ = "0.1.0"

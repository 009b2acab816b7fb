"""Line-parameter extraction from spectra.

Three independent estimators: a damped least-squares Lorentzian fit with
analytic derivatives, a model-free FWHM from half-level crossings, and a
log-log power-law fit for width-vs-angle scaling laws.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .lineshape import Spectrum

__all__ = [
    "DegenerateDataError",
    "PeakShapeError",
    "LorentzianFit",
    "PowerLawFit",
    "fit_lorentzian",
    "numeric_fwhm",
    "power_law_exponent",
]


class DegenerateDataError(ValueError):
    """Data carry no peak to fit (e.g. all values equal)."""


class PeakShapeError(ValueError):
    """Data are not a single interior peak (boundary peak, multiple peaks)."""


@dataclass(frozen=True)
class LorentzianFit:
    """Result of fitting A*w^2/((x - x0)^2 + w^2) + B.

    center        x0 [rad/s]
    hwhm          w, half width at half maximum [rad/s], positive
    amplitude     A, signed peak height relative to the baseline
    offset        B, baseline
    residual_norm sqrt(sum of squared residuals)
    converged     True if the iteration met the step tolerance
    iterations    number of iterations performed
    """

    center: float
    hwhm: float
    amplitude: float
    offset: float
    residual_norm: float
    converged: bool
    iterations: int

    @property
    def fwhm(self) -> float:
        return 2.0 * self.hwhm


@dataclass(frozen=True)
class PowerLawFit:
    """ys ~ prefactor * xs**exponent, fitted by least squares in log-log."""

    exponent: float
    prefactor: float
    r_squared: float


def _lorentz_model(x: np.ndarray, x0: float, w: float, a: float, b: float) -> np.ndarray:
    return a * w**2 / ((x - x0) ** 2 + w**2) + b


def _lorentz_jacobian(x: np.ndarray, x0: float, w: float, a: float) -> np.ndarray:
    d = x - x0
    denom = d**2 + w**2
    j = np.empty((x.size, 4))
    j[:, 0] = 2.0 * a * w**2 * d / denom**2          # d/dx0
    j[:, 1] = 2.0 * a * w * d**2 / denom**2           # d/dw
    j[:, 2] = w**2 / denom                            # d/dA
    j[:, 3] = 1.0                                     # d/dB
    return j


def fit_lorentzian(
    spec: Spectrum, max_iterations: int = 100, step_tol: float = 1e-9
) -> LorentzianFit:
    """Least-squares Lorentzian fit with analytic derivatives.

    Damped (Levenberg-Marquardt style) normal equations; the damping is
    multiplied by 10 whenever a step increases the cost and divided by 10
    on success.  Initial parameters come from the data: center at the
    extremum, baseline from the outer 20% of samples, half-width from the
    model-free FWHM estimate (grid span / 10 if that fails).

    Non-convergence is reported through converged=False with the
    best-so-far parameters, not an exception.
    """
    x = spec.detuning
    y = spec.values
    n = x.size
    if n < 8:
        raise ValueError(f"need at least 8 samples to fit, got {n}")
    if np.all(y == y[0]):
        raise DegenerateDataError("all spectrum values are equal; nothing to fit")

    # --- initialization from the data
    n_outer = max(1, n // 10)
    b0 = float(np.median(np.concatenate([y[:n_outer], y[-n_outer:]])))
    i_peak = int(np.argmax(np.abs(y - b0)))
    x0 = float(x[i_peak])
    a0 = float(y[i_peak] - b0)
    try:
        w0 = 0.5 * numeric_fwhm(spec)
    except (PeakShapeError, DegenerateDataError):
        w0 = float(x[-1] - x[0]) / 10.0
    p = np.array([x0, w0, a0, b0])

    def cost(params):
        r = _lorentz_model(x, *params) - y
        return float(r @ r), r

    best_cost, r = cost(p)
    damping = 1e-3
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        j = _lorentz_jacobian(x, p[0], p[1], p[2])
        jtj = j.T @ j
        g = j.T @ r
        try:
            step = np.linalg.solve(jtj + damping * np.diag(np.diag(jtj)), -g)
        except np.linalg.LinAlgError:
            damping *= 10.0
            continue
        p_new = p + step
        new_cost, r_new = cost(p_new)
        if new_cost <= best_cost:
            rel_step = float(np.max(np.abs(step) / (np.abs(p_new) + 1e-300)))
            p, best_cost, r = p_new, new_cost, r_new
            damping = max(damping / 10.0, 1e-15)
            if rel_step < step_tol:
                converged = True
                break
        else:
            damping *= 10.0
            if damping > 1e15:
                break

    x0, w, a, b = p
    w = abs(float(w))
    fit = LorentzianFit(
        center=float(x0),
        hwhm=w,
        amplitude=float(a),
        offset=float(b),
        residual_norm=math.sqrt(best_cost),
        converged=converged,
        iterations=iterations,
    )
    if converged and (x[-1] - x[0]) < 3.0 * fit.fwhm:
        warnings.warn(
            "detuning grid spans less than 3 fitted FWHM; width estimate may be biased",
            UserWarning,
            stacklevel=2,
        )
    return fit


def numeric_fwhm(spec: Spectrum) -> float:
    """Model-free full width at half maximum [rad/s].

    Baseline is the mean of the outer 10% of samples on each side, the
    half level is midway between baseline and extremum, and the two
    crossings are located by linear interpolation on both flanks.
    Rejects peaks touching the grid boundary and multi-peaked data.
    """
    x = spec.detuning
    y = spec.values
    n = x.size
    if n < 4:
        raise ValueError(f"need at least 4 samples, got {n}")
    if np.all(y == y[0]):
        raise DegenerateDataError("all spectrum values are equal; no peak")

    n_outer = max(1, n // 10)
    baseline = float(np.mean(np.concatenate([y[:n_outer], y[-n_outer:]])))
    dev = y - baseline
    i_peak = int(np.argmax(np.abs(dev)))  # ties resolve to the lowest index
    sign = 1.0 if dev[i_peak] >= 0.0 else -1.0
    g = sign * dev
    if i_peak == 0 or i_peak == n - 1:
        raise PeakShapeError("peak touches the grid boundary")

    half = 0.5 * g[i_peak]
    above = g > half
    crossings = int(np.count_nonzero(np.diff(above.astype(np.int8)) != 0))
    if crossings > 2:
        raise PeakShapeError(f"found {crossings} half-level crossings; data are multi-peaked")

    # left flank
    left = None
    for i in range(i_peak, 0, -1):
        if g[i - 1] <= half < g[i]:
            left = x[i - 1] + (x[i] - x[i - 1]) * (half - g[i - 1]) / (g[i] - g[i - 1])
            break
    # right flank
    right = None
    for i in range(i_peak, n - 1):
        if g[i + 1] <= half < g[i]:
            right = x[i] + (x[i + 1] - x[i]) * (g[i] - half) / (g[i] - g[i + 1])
            break
    if left is None or right is None:
        raise PeakShapeError("half level is not crossed on both flanks of the peak")
    return float(right - left)


def power_law_exponent(xs, ys) -> PowerLawFit:
    """Ordinary least squares on (ln x, ln y)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size:
        raise ValueError("xs and ys must have equal length")
    if xs.size < 3:
        raise ValueError(f"need at least 3 points, got {xs.size}")
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise ValueError("power-law fit requires strictly positive xs and ys")
    lx = np.log(xs)
    ly = np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return PowerLawFit(exponent=float(slope), prefactor=float(math.exp(intercept)), r_squared=r2)

"""Brute-force oracle for the collision-narrowed two-photon line.

Simulates an ensemble of 1-D atomic trajectories undergoing
velocity-changing collisions (Poisson epochs, full rethermalization at
each collision), accumulates the phase-correlation function
<exp(i*delta_q*(z(t) - z(0)))>, and reconstructs the spectrum by a
trapezoidal Fourier transform.  Entirely independent of the closed-form
lineshape, so the two can cross-validate.

Determinism contract: a given seed produces bit-identical results for
any number of worker threads.  Trajectories draw from per-index
substreams and are accumulated in fixed-size blocks that are reduced in
index order.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from . import _rng
from .lineshape import Spectrum

__all__ = [
    "ResourceBudgetError",
    "McConfig",
    "CorrelationTrace",
    "simulate_correlation",
    "simulate_correlation_grouped",
    "spectrum_from_correlation",
    "ballistic_reference",
    "default_t_max",
]

# Trajectories per accumulation block.  Fixed so that the reduction
# order (and hence the result, bitwise) never depends on thread count.
BLOCK = 64

# Guard against accidentally huge ensemble * grid allocations.
DEFAULT_SAMPLE_BUDGET = 1 << 30

TRUNCATION_THRESHOLD = 1e-4
TRUNCATION_BIAS_LIMIT = 1e-2


class ResourceBudgetError(ValueError):
    """n_trajectories * n_time_samples exceeds the configured budget."""


@dataclass(frozen=True)
class McConfig:
    """Ensemble simulation parameters.

    delta_q         wave-vector difference |q1 - q2| [rad/m]
    v_th            1-D rms thermal velocity [m/s]
    collision_rate  velocity-changing collision rate [1/s]
    gamma_12        ground-state decoherence rate [rad/s], applied as a
                    deterministic envelope exp(-gamma_12 * t)
    n_trajectories  ensemble size
    t_max           last sample time [s]
    n_time_samples  uniform time grid size
    seed            base seed for the per-trajectory substreams
    """

    delta_q: float
    v_th: float
    collision_rate: float
    gamma_12: float
    n_trajectories: int
    t_max: float
    n_time_samples: int = 2048
    seed: int = 0

    def __post_init__(self):
        if self.delta_q < 0.0:
            raise ValueError(f"delta_q must be >= 0, got {self.delta_q}")
        if self.v_th < 0.0:
            raise ValueError(f"v_th must be >= 0, got {self.v_th}")
        if self.collision_rate < 0.0:
            raise ValueError(f"collision_rate must be >= 0, got {self.collision_rate}")
        if self.gamma_12 < 0.0:
            raise ValueError(f"gamma_12 must be >= 0, got {self.gamma_12}")
        if self.n_trajectories < 1:
            raise ValueError(f"n_trajectories must be >= 1, got {self.n_trajectories}")
        if not self.t_max > 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.n_time_samples < 2:
            raise ValueError(f"n_time_samples must be >= 2, got {self.n_time_samples}")


@dataclass(frozen=True)
class CorrelationTrace:
    """Ensemble phase-correlation function on a time grid from 0.

    values[0] == 1 exactly; statistical_error is the standard error of
    the ensemble mean at each sample (zero where the phase is
    deterministic).
    """

    times: np.ndarray
    values: np.ndarray
    statistical_error: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        e = np.asarray(self.statistical_error, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "statistical_error", e)
        if not (t.shape == v.shape == e.shape) or t.ndim != 1:
            raise ValueError("times, values, statistical_error must be 1-D and equal length")
        if t[0] != 0.0 or not np.all(np.diff(t) > 0.0):
            raise ValueError("times must increase strictly from 0")
        if v[0] != 1.0 + 0.0j:
            raise ValueError(f"values[0] must be exactly 1, got {v[0]}")
        if np.any(np.abs(v) > 1.0 + 3.0 * e + 1e-12):
            raise ValueError(
                "correlation magnitude exceeds 1 beyond three standard errors"
            )

    def __len__(self) -> int:
        return self.times.size


@njit(cache=True, parallel=True)
def _accumulate_blocks(
    seed, n_traj, n_t, dt_samp, delta_q, v_th, rate,
    nw, nt_, ny, ew, et, ey,
):
    """Per-block sums of cos, sin and their squares over the ensemble."""
    n_blocks = (n_traj + BLOCK - 1) // BLOCK
    sums = np.zeros((n_blocks, 4, n_t))
    inv_rate = 1.0 / rate if rate > 0.0 else 0.0
    for b in prange(n_blocks):
        i_lo = b * BLOCK
        i_hi = min(i_lo + BLOCK, n_traj)
        s_re = sums[b, 0]
        s_im = sums[b, 1]
        s_re2 = sums[b, 2]
        s_im2 = sums[b, 3]
        state = np.empty(4, dtype=np.uint64)
        for i in range(i_lo, i_hi):
            _rng.stream_init(seed, i, state)
            v = v_th * _rng.standard_normal(state, nw, nt_, ny)
            if rate > 0.0:
                t_prev = 0.0
                z = 0.0
                k = 0
                t_samp = 0.0
                while True:
                    t_col = t_prev + _rng.standard_exponential(state, ew, et, ey) * inv_rate
                    while t_samp <= t_col:
                        ph = delta_q * (z + v * (t_samp - t_prev))
                        c = np.cos(ph)
                        s = np.sin(ph)
                        s_re[k] += c
                        s_im[k] += s
                        s_re2[k] += c * c
                        s_im2[k] += s * s
                        k += 1
                        if k >= n_t:
                            break
                        t_samp = k * dt_samp
                    if k >= n_t:
                        break
                    z += v * (t_col - t_prev)
                    t_prev = t_col
                    v = v_th * _rng.standard_normal(state, nw, nt_, ny)
            else:
                # ballistic: a single free flight covers the grid
                for k in range(n_t):
                    ph = delta_q * v * (k * dt_samp)
                    c = np.cos(ph)
                    s = np.sin(ph)
                    s_re[k] += c
                    s_im[k] += s
                    s_re2[k] += c * c
                    s_im2[k] += s * s
    return sums


def default_t_max(gamma_12: float, excess_hwhm: float) -> float:
    """Default trace length: ten decay times of the expected line half-width."""
    width = gamma_12 + excess_hwhm
    if not width > 0.0:
        raise ValueError("gamma_12 + excess_hwhm must be > 0 to choose t_max")
    return 10.0 / width


def _reduce_trace(cfg: McConfig, block_sums: np.ndarray, blocks: slice) -> CorrelationTrace:
    sums = block_sums[blocks]
    n_per_block = np.full(sums.shape[0], BLOCK, dtype=np.int64)
    # the last block of the whole ensemble may be partial
    total_blocks = block_sums.shape[0]
    if blocks.stop is None or blocks.stop >= total_blocks:
        n_per_block[-1] = cfg.n_trajectories - (total_blocks - 1) * BLOCK
    n = int(n_per_block.sum())
    # reduce in block (= trajectory) order for bit-stable results
    acc = np.zeros((4, cfg.n_time_samples))
    for b in range(sums.shape[0]):
        acc += sums[b]
    mean_re = acc[0] / n
    mean_im = acc[1] / n
    if n > 1:
        var_re = np.maximum(acc[2] - n * mean_re**2, 0.0) / (n - 1)
        var_im = np.maximum(acc[3] - n * mean_im**2, 0.0) / (n - 1)
        stderr = np.sqrt((var_re + var_im) / n)
    else:
        stderr = np.zeros(cfg.n_time_samples)
    dt = cfg.t_max / (cfg.n_time_samples - 1)
    times = np.arange(cfg.n_time_samples) * dt
    envelope = np.exp(-cfg.gamma_12 * times)
    values = (mean_re + 1j * mean_im) * envelope
    return CorrelationTrace(times=times, values=values, statistical_error=stderr * envelope)


def simulate_correlation(cfg: McConfig, budget: int = DEFAULT_SAMPLE_BUDGET) -> CorrelationTrace:
    """Run the trajectory ensemble and return the mean phase correlation.

    Per trajectory: the initial 1-D velocity is Gaussian with standard
    deviation v_th, collision epochs form a Poisson process of rate
    collision_rate, the velocity is redrawn from the same Gaussian at
    each collision, and the position integrates piecewise linearly.  The
    ground-state decoherence enters as the deterministic envelope
    exp(-gamma_12 * t).
    """
    if cfg.n_trajectories * cfg.n_time_samples > budget:
        raise ResourceBudgetError(
            f"n_trajectories * n_time_samples = "
            f"{cfg.n_trajectories * cfg.n_time_samples} exceeds budget {budget}"
        )
    block_sums = _run_kernel(cfg)
    return _reduce_trace(cfg, block_sums, slice(None))


def simulate_correlation_grouped(
    cfg: McConfig, n_groups: int = 10, budget: int = DEFAULT_SAMPLE_BUDGET
) -> tuple[CorrelationTrace, list[CorrelationTrace]]:
    """Full-ensemble trace plus traces of disjoint sub-ensembles.

    The sub-ensembles partition the trajectory blocks contiguously; group
    statistics (e.g. the spread of fitted widths) estimate the
    uncertainty of ensemble-derived quantities without extra simulation.
    """
    if cfg.n_trajectories * cfg.n_time_samples > budget:
        raise ResourceBudgetError(
            f"n_trajectories * n_time_samples = "
            f"{cfg.n_trajectories * cfg.n_time_samples} exceeds budget {budget}"
        )
    block_sums = _run_kernel(cfg)
    full = _reduce_trace(cfg, block_sums, slice(None))
    n_blocks = block_sums.shape[0]
    n_groups = min(n_groups, n_blocks)
    edges = np.linspace(0, n_blocks, n_groups + 1, dtype=int)
    groups = [
        _reduce_trace(cfg, block_sums, slice(int(edges[g]), int(edges[g + 1])))
        for g in range(n_groups)
    ]
    return full, groups


def _run_kernel(cfg: McConfig) -> np.ndarray:
    dt = cfg.t_max / (cfg.n_time_samples - 1)
    return _accumulate_blocks(
        np.uint64(cfg.seed % (1 << 64)),
        cfg.n_trajectories,
        cfg.n_time_samples,
        dt,
        cfg.delta_q,
        cfg.v_th,
        cfg.collision_rate,
        _rng.NORMAL_W, _rng.NORMAL_T, _rng.NORMAL_Y,
        _rng.EXP_W, _rng.EXP_T, _rng.EXP_Y,
    )


def spectrum_from_correlation(trace: CorrelationTrace, detuning_grid) -> Spectrum:
    """Spectrum Re integral of trace(t)*exp(i*detuning*t) dt by trapezoid.

    The trace is truncated at the first sample where |values| falls below
    1e-4 (noise beyond that point only adds variance).  Warns when the
    trace has not decayed below 1e-2 by its end, since the sharp cutoff
    then biases the transform.
    """
    grid = np.asarray(detuning_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid must not be empty")
    if not np.all(np.diff(grid) > 0.0):
        raise ValueError("detuning grid must be strictly increasing")

    mag = np.abs(trace.values)
    below = np.nonzero(mag < TRUNCATION_THRESHOLD)[0]
    stop = int(below[0]) + 1 if below.size else len(trace)
    times = trace.times[:stop]
    values = trace.values[:stop]
    if abs(values[-1]) > TRUNCATION_BIAS_LIMIT:
        warnings.warn(
            f"|correlation| = {abs(values[-1]):.3g} at the end of the trace; "
            "the truncated transform is biased (extend t_max)",
            UserWarning,
            stacklevel=2,
        )
    # (n_detunings x n_times) phase matrix; grids here are small
    phases = np.exp(1j * np.outer(grid, times))
    spectrum = np.trapezoid(phases * values, times, axis=1).real
    return Spectrum(detuning=grid, values=spectrum, kind="correlation-derived")


def ballistic_reference(delta_q: float, v_th: float, gamma_12: float, times) -> CorrelationTrace:
    """Closed-form collisionless trace exp(-(delta_q*v_th*t)^2/2 - gamma_12*t)."""
    t = np.asarray(times, dtype=float)
    values = np.exp(-0.5 * (delta_q * v_th * t) ** 2 - gamma_12 * t).astype(complex)
    return CorrelationTrace(
        times=t, values=values, statistical_error=np.zeros_like(t)
    )

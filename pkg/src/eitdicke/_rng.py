"""Counter-keyed random streams for the trajectory ensemble.

Each trajectory i draws from its own xoshiro256++ stream whose state is
derived from (seed, i) with a splitmix64 chain, so results do not depend
on how trajectories are scheduled across workers.  Gaussian and
exponential variates use 256-layer ziggurat tables.
"""

import math

import numpy as np
from numba import njit

U64 = np.uint64
_TWO53 = 1.1102230246251565e-16  # 2**-53

# Ziggurat right-edge abscissae; the recursions below close to ~1e-12
# at these values for 256 layers.
ZIGGURAT_NORMAL_R = 3.6541528853610088
ZIGGURAT_EXP_R = 7.69711747013105


def _normal_tables(n: int = 256, r: float = ZIGGURAT_NORMAL_R):
    x = np.empty(n)
    y = np.empty(n)
    x[0] = r
    y[0] = math.exp(-0.5 * r * r)
    v = r * y[0] + math.sqrt(math.pi / 2.0) * math.erfc(r / math.sqrt(2.0))
    for i in range(1, n - 1):
        y[i] = y[i - 1] + v / x[i - 1]
        x[i] = math.sqrt(-2.0 * math.log(y[i]))
    x[n - 1] = 0.0
    y[n - 1] = 1.0
    widths = np.empty(n)
    inner = np.empty(n)
    widths[0] = v / y[0]
    inner[0] = r
    widths[1:] = x[:-1]
    inner[1:] = x[1:]
    return widths, inner, y


def _exp_tables(n: int = 256, r: float = ZIGGURAT_EXP_R):
    x = np.empty(n)
    y = np.empty(n)
    x[0] = r
    y[0] = math.exp(-r)
    v = (r + 1.0) * math.exp(-r)
    for i in range(1, n - 1):
        y[i] = y[i - 1] + v / x[i - 1]
        x[i] = -math.log(y[i])
    x[n - 1] = 0.0
    y[n - 1] = 1.0
    widths = np.empty(n)
    inner = np.empty(n)
    widths[0] = v / y[0]
    inner[0] = r
    widths[1:] = x[:-1]
    inner[1:] = x[1:]
    return widths, inner, y


NORMAL_W, NORMAL_T, NORMAL_Y = _normal_tables()
EXP_W, EXP_T, EXP_Y = _exp_tables()


@njit(cache=True, inline="always")
def stream_init(seed, index, state):
    """Fill a 4-word xoshiro256++ state for substream `index` of `seed`."""
    st = U64(seed) + U64(index) * U64(0xD1342543DE82EF95)
    for j in range(4):
        st = st + U64(0x9E3779B97F4A7C15)
        z = st
        z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
        state[j] = z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def next_u64(s):
    tmp = s[0] + s[3]
    result = ((tmp << U64(23)) | (tmp >> U64(41))) + s[0]
    t = s[1] << U64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = (s[3] << U64(45)) | (s[3] >> U64(19))
    return result


@njit(cache=True, inline="always")
def uniform(s):
    """Uniform double in [0, 1)."""
    return (next_u64(s) >> U64(11)) * _TWO53


@njit(cache=True, inline="always")
def standard_normal(s, widths, inner, heights):
    """Ziggurat standard normal; one u64 per draw in the common case."""
    while True:
        u = next_u64(s)
        i = np.int64(u & U64(0xFF))
        x = (u >> U64(11)) * _TWO53 * widths[i]
        neg = (u >> U64(8)) & U64(1)
        if x < inner[i]:
            return -x if neg else x
        if i == 0:
            # tail beyond the base layer
            while True:
                xx = -np.log(1.0 - uniform(s)) / ZIGGURAT_NORMAL_R
                yy = -np.log(1.0 - uniform(s))
                if yy + yy > xx * xx:
                    break
            x = ZIGGURAT_NORMAL_R + xx
            return -x if neg else x
        y0 = heights[i - 1]
        if y0 + uniform(s) * (heights[i] - y0) < np.exp(-0.5 * x * x):
            return -x if neg else x


@njit(cache=True, inline="always")
def standard_exponential(s, widths, inner, heights):
    """Ziggurat unit exponential."""
    while True:
        u = next_u64(s)
        i = np.int64(u & U64(0xFF))
        x = (u >> U64(11)) * _TWO53 * widths[i]
        if x < inner[i]:
            return x
        if i == 0:
            # memoryless tail: r plus a fresh exponential
            return ZIGGURAT_EXP_R - np.log(1.0 - uniform(s))
        y0 = heights[i - 1]
        if y0 + uniform(s) * (heights[i] - y0) < np.exp(-x):
            return x

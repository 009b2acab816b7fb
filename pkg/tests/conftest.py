import math

import pytest

from eitdicke import EitParams, kinetics_report, rb87_neon_cell

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def cell():
    """Reference cell: Rb-87 at 52 C with 10 Torr Ne, 795 nm."""
    return rb87_neon_cell()


@pytest.fixture(scope="session")
def kin(cell):
    return kinetics_report(cell)


@pytest.fixture(scope="session")
def eit():
    """Reference rates: gamma_opt/2pi = 150 MHz, gamma_12/2pi = 1 kHz,
    rabi_pump/2pi = 100 kHz (inside the low-power-broadening regime)."""
    return EitParams(
        gamma_opt=TWO_PI * 150e6,
        gamma_12=TWO_PI * 1000.0,
        rabi_pump=TWO_PI * 100e3,
        light_shift=0.0,
    )

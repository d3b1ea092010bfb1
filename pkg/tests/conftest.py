import numpy as np
import pytest

from fibervortex import fiber, gauge
from fibervortex.constants import RB87_D2_DIPOLE_CM


@pytest.fixture(scope="session")
def spec_he11():
    """Single-mode nanofiber: 200 nm radius, 700 nm blue-detuned light."""
    return fiber.FiberSpec(radius_a=200e-9, wavelength=700e-9)


@pytest.fixture(scope="session")
def mode_he11(spec_he11):
    return fiber.solve_mode(spec_he11, ell=1, branch=1)


@pytest.fixture(scope="session")
def spec_he21():
    """Two-mode nanofiber: 450 nm radius, 980 nm red-detuned light.

    (The exact vectorial HE21 cutoff for silica/vacuum sits near V = 2.8,
    so the radius is chosen a bit above the V > 2.405 folklore value.)
    """
    return fiber.FiberSpec(radius_a=450e-9, wavelength=980e-9)


@pytest.fixture(scope="session")
def mode_he21(spec_he21):
    return fiber.solve_mode(spec_he21, ell=2, branch=1)


def isotropic_dipole():
    d0 = RB87_D2_DIPOLE_CM / np.sqrt(3.0)
    return (d0, d0, d0)


@pytest.fixture()
def gauge_spec_he11(spec_he11):
    return gauge.GaugeFieldSpec(dipole=isotropic_dipole(),
                                detuning_delta=-2 * np.pi * 1e10,
                                kappa0=2 * np.pi / 780.241e-9,
                                n1=spec_he11.n1)

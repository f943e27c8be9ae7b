import numpy as np
import pytest

from kkorbits.groups import GroupFlavor
from kkorbits.momenta import momentum_from_worldline, momentum_from_worldline_5d

E_T = np.array([1.0, 0.0, 0.0, 0.0])
E_Z = np.array([0.0, 0.0, 0.0, 1.0])
WORLDLINE_X = np.array([0.3, -0.2, 0.5, 0.1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def poincare_spin():
    """Rest mass 2, spin 0.5 about z, worldline through WORLDLINE_X."""
    return momentum_from_worldline(GroupFlavor.poincare(), WORLDLINE_X, E_T, E_Z, s=0.5, m0=2.0)


@pytest.fixture
def g0_charged_spin():
    return momentum_from_worldline(GroupFlavor.g0(), WORLDLINE_X, E_T, E_Z, s=0.5, m0=2.0, q=1.5)


@pytest.fixture
def g0_charged_spinless():
    return momentum_from_worldline(GroupFlavor.g0(), WORLDLINE_X, E_T, E_Z, s=0.0, m0=2.0, q=1.5)


def worked_momentum(flavor: GroupFlavor, s: float = 0.5):
    """Î = (√2, 0, 0, 0, 1/ω) is unit timelike for every ω."""
    I_hat = np.array([np.sqrt(2.0), 0.0, 0.0, 0.0, 1.0 / flavor.omega])
    J1 = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    J2 = np.array([0.0, 0.0, 1.0, 0.0, 0.0])
    return momentum_from_worldline_5d(flavor, np.zeros(5), I_hat, J1, J2, s=s, m0=1.0)


@pytest.fixture
def g1_worked():
    return worked_momentum(GroupFlavor.g1())

import numpy as np
import pytest

from rabiholo import RabiParams, build_rabi_hamiltonian, diagonalize


@pytest.fixture(scope="session")
def basis30():
    """Production-cutoff dressed basis at the working point (0.8, 0.3)."""
    return diagonalize(build_rabi_hamiltonian(RabiParams(1.0, 0.8, 0.3, 30)))


@pytest.fixture(scope="session")
def basis12():
    """Small-cutoff basis for propagation-heavy unit tests."""
    return diagonalize(build_rabi_hamiltonian(RabiParams(1.0, 0.8, 0.3, 12)))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)

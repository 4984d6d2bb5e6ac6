import numpy as np
import pytest

from omqm import QuantumParams, ThermoParams


@pytest.fixture
def unit_tp() -> ThermoParams:
    return ThermoParams(R=1.0, s=1.0, k_B=1.0)


@pytest.fixture
def unit_qp() -> QuantumParams:
    return QuantumParams(m=1.0, omega=1.0, hbar=1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(20260810))

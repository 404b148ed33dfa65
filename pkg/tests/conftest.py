import numpy as np
import pytest

from pffiber.hamiltonian import build_model
from pffiber.modes import ModelParams


@pytest.fixture(scope="session")
def small_params():
    # 4 modes (1 shell x 2 antipodal directions x 2 polarizations), N_max = 2
    return ModelParams(
        e=0.1, gamma=0.5, M=1.0, m_ph=0.5, Lambda=1.0,
        n_shells=1, n_dirs=2, N_max=2,
    )


@pytest.fixture(scope="session")
def default_params():
    # 24 modes (2 shells x 6 directions x 2 polarizations), N_max = 1
    return ModelParams(
        e=0.1, gamma=0.5, M=1.0, m_ph=0.5, Lambda=1.0,
        n_shells=2, n_dirs=6, N_max=1,
    )


@pytest.fixture(scope="session")
def small_model(small_params):
    return build_model(small_params)


@pytest.fixture(scope="session")
def default_model(default_params):
    return build_model(default_params)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)

"""
Pytest configuration and shared fixtures
"""

import copy

import pytest
import yaml

from src.models import bivariate_death, multistrain_sir
from src.models.bivariate_death import BivariateDeathParams, bivariate_death_system
from src.models.multistrain_sir import SirParams, multistrain_sir_system
from src.rates.cojump import GammaNoiseParams, get_table_cache
from src.simulators.rng import RngStream
from tests.fixtures.configs import BIVARIATE_CONFIG, SIR_CONFIG


@pytest.fixture
def noise():
    """Gamma noise with tau = 0.5."""
    return GammaNoiseParams(0.5)


@pytest.fixture
def sir_params():
    """Default two-strain SIR parameters."""
    return SirParams(P=200, beta=1.5, omega=0.01, alpha=1.0, m=0.02, r=0.5, gamma=0.0, tau=0.2)


@pytest.fixture
def sir_system(sir_params):
    """Noisy two-strain SIR system."""
    return multistrain_sir_system(sir_params)


@pytest.fixture
def sir_init(sir_params):
    """S=190, I1=I2=5."""
    return multistrain_sir.initial_state(sir_params)


@pytest.fixture
def bivariate_params():
    """Bivariate death at (5, 5), delta = tau = 0.5."""
    return BivariateDeathParams(y1_0=5, y2_0=5, delta=0.5, tau=0.5)


@pytest.fixture
def bivariate_system(bivariate_params):
    """Bivariate death system."""
    return bivariate_death_system(bivariate_params)


@pytest.fixture
def bivariate_init(bivariate_params):
    """Initial bivariate death state."""
    return bivariate_death.initial_state(bivariate_params)


@pytest.fixture
def stream():
    """Seeded random stream."""
    return RngStream(12345, 0)


@pytest.fixture
def sir_config_data():
    """SIR run configuration document."""
    return copy.deepcopy(SIR_CONFIG)


@pytest.fixture
def bivariate_config_data():
    """Bivariate death run configuration document."""
    return copy.deepcopy(BIVARIATE_CONFIG)


@pytest.fixture
def write_config(tmp_path):
    """Write a configuration document to a YAML file and return its path."""
    def _write(data, name='config.yaml'):
        path = tmp_path / name
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(data, f)
        return str(path)
    return _write


@pytest.fixture
def temp_output_dir(tmp_path):
    """Temporary output directory for tests."""
    output_dir = tmp_path / "output"
    output_dir.mkdir()
    return str(output_dir)


@pytest.fixture(autouse=True)
def clear_table_cache():
    """Start every test with an empty rate-table memo."""
    get_table_cache().clear()
    yield

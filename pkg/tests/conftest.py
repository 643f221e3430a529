import pytest

from fogrelay.config import ExperimentConfig


@pytest.fixture(scope="session")
def default_config() -> ExperimentConfig:
    return ExperimentConfig()


@pytest.fixture(scope="session")
def params(default_config):
    """Default link parameters in linear units."""
    return default_config.radio()

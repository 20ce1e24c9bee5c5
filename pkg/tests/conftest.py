import hypothesis
import numpy as np
import pytest

from fdjam.channels import sample_channels
from fdjam.config import SystemConfig

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def default_config() -> SystemConfig:
    return SystemConfig()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(0xF0)


def channels(config: SystemConfig, n: int, seed0: int = 1000):
    """n reproducible channel draws."""
    return [sample_channels(config, seed0 + k) for k in range(n)]

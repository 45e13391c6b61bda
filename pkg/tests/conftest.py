import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# fixed examples so CI runs are reproducible
settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repro")

SEED = 20240517


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)

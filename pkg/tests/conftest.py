import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from helpers import cosine, random_matrix

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_cosines(rng):
    return [cosine(random_matrix(rng, 6, rng.uniform(0.5, 4.0))) for _ in range(5)]


@pytest.fixture
def scalar_cos():
    return cosine([[-1.0]])


@pytest.fixture
def nilpotent():
    return np.array([[0.0, 1.0], [0.0, 0.0]])

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from isowillmore import catalog

# deterministic property runs
settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def veronese():
    return catalog.make("sphere_family", 2)


@pytest.fixture
def hyp2():
    return catalog.make("hyperbolic_family", 2)


@pytest.fixture
def moebius():
    return catalog.make("moebius")


def random_points(rng, n, rmax=3.0, rmin=0.05):
    r = rng.uniform(rmin, rmax, n)
    th = rng.uniform(0, 2 * math.pi, n)
    return r * np.exp(1j * th)

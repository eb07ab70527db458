import numpy as np
import pytest

from ves.core import BENCHMARK, VesParams


@pytest.fixture
def bench():
    return BENCHMARK


@pytest.fixture
def cobb_douglas():
    return VesParams(0.6, 0.0, 0.7, 0.2, 0.8, 1.0, "extended")


@pytest.fixture
def ces():
    return VesParams(0.0, 2.0, 0.5, 0.2, 0.8, 1.0, "extended")


@pytest.fixture
def low_psi():
    return VesParams(0.6, 0.5, 0.4, 0.2, 0.8, 1.05)


def random_strict_params(rng, n, gamma=(0.5, 2.0)):
    """``n`` strict-mode parameter sets drawn uniformly subject to theta + omega*psi < 1."""
    out = []
    while len(out) < n:
        theta, omega, psi, alpha, beta = rng.uniform(0.01, 0.99, 5)
        if theta + omega * psi >= 0.99:
            continue
        out.append(VesParams(theta, omega, psi, alpha, beta, rng.uniform(*gamma)))
    return out


@pytest.fixture
def random_params():
    return random_strict_params(np.random.default_rng(20240601), 1000)

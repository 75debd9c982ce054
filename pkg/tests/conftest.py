import numpy as np
import pytest

from qexclusion import ensembles, linalg


@pytest.fixture(params=linalg.available_backends())
def backend(request):
    """Run a test once per available Jacobi backend."""
    old = linalg.get_backend()
    linalg.set_backend(request.param)
    yield request.param
    linalg.set_backend(old)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def orthogonal_pair():
    return ensembles.make_ensemble([[1, 0], [0, 1]])


@pytest.fixture
def identical_pair():
    return ensembles.make_ensemble([[1, 0], [1, 0]])


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)

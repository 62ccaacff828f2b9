import numpy as np
import pytest

from dirgeo.families import family


@pytest.fixture(scope="session")
def trigamma():
    return family("trigamma")


@pytest.fixture(scope="session")
def rational():
    return family("rational")


@pytest.fixture(scope="session", params=("trigamma", "rational"))
def mf(request):
    """Either built-in family; tests that hold for both take this."""
    return family(request.param)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Trigger numba compilation once so timed tests measure the numerics.
    from dirgeo.geodesics import geodesic_ivp

    geodesic_ivp(family("trigamma"), [1.0, 1.0], [0.1, -0.1], 0.01, samples=2)
    geodesic_ivp(family("rational"), [1.0, 1.0], [0.1, -0.1], 0.01, samples=2)


def random_point(rng, n, lo=-1.5, hi=1.5):
    """Log-uniform point of M, the shared sampling protocol of the suite."""
    return np.exp(rng.uniform(lo, hi, n))

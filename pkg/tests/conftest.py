import numpy as np
import pytest

from growthops import _kernels


@pytest.fixture(params=["numba", "numpy"])
def kernel_path(request):
    """Run the test once with each kernel implementation."""
    if request.param == "numba" and not _kernels._HAVE_NUMBA:
        pytest.skip("numba not importable")
    prev = _kernels.use_numba(request.param == "numba")
    yield request.param
    _kernels.use_numba(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def report(criterion, passed, detail):
    """Print the one-line verdict the acceptance suite is read by."""
    print(f"\n{'PASS' if passed else 'FAIL'} [criterion {criterion}] {detail}")

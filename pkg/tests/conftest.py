import numpy as np
import pytest
from hypothesis import settings

from nullbundle import bundle as bd
from nullbundle.spacetime import minkowski

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def flat():
    return minkowski()


@pytest.fixture
def schw():
    return bd.schwarzschild()


@pytest.fixture(params=["minkowski", "schwarzschild"])
def spacetime(request):
    return bd.get_spacetime(request.param)


@pytest.fixture
def sampling(spacetime):
    return bd.default_sampling(spacetime)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from voa.qstate import Ket

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def haar_ket(rng, dims=(2, 2, 2)):
    n = int(np.prod(dims))
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return Ket(dims, z / np.linalg.norm(z))


def random_psd(rng, n, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_monotone(rng, n=None, scale=10.0):
    n = n or int(rng.integers(1, 40))
    v = np.sort(rng.uniform(0, scale, size=n))[::-1]
    if rng.random() < 0.3:
        v[rng.integers(1, n + 1):] = 0.0
    return v


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("qcurv", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qcurv")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion: ``criterion(n, ok, text)``."""

    def record(n, ok, text):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

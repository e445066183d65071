import numpy as np
import pytest

from taqr.kernels import KERNELS

_ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(params=sorted(KERNELS))
def backend(request):
    return request.param


@pytest.fixture
def report_criterion():
    """Record a one-line verdict; the lines are repeated in the terminal summary."""

    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

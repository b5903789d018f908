import time

import pytest

from hypervirial import CORNELL, QUARTIC, QuantumState, energy_series

_ACCEPTANCE_LINES = []
_LARGE = {}


@pytest.fixture
def acceptance_report():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""

    def record(number, passed, text):
        line = f"[criterion {number}] {'PASS' if passed else 'FAIL'}: {text}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def large_series(name):
    """Order-1000 1S series, computed once per session; returns (series, seconds)."""
    if name not in _LARGE:
        family = {"cornell": CORNELL, "quartic": QUARTIC}[name]
        start = time.perf_counter()
        series = energy_series(family, QuantumState(0, 0), 1000)
        _LARGE[name] = (series, time.perf_counter() - start)
    return _LARGE[name]


@pytest.fixture(scope="session")
def cornell_1000():
    return large_series("cornell")


@pytest.fixture(scope="session")
def quartic_1000():
    return large_series("quartic")

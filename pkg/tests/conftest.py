import numpy as np
import pytest

_ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report():
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def _report(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[n])

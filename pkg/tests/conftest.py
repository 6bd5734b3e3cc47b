import numpy as np
import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion for the end-of-run summary."""

    def record(number, passed, detail):
        _CRITERIA[number] = (bool(passed), detail)
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

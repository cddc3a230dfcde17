import pytest

from cumdev.core import Dataset

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


def pytest_terminal_summary(terminalreporter, config):
    verdicts = config.stash.get(_VERDICTS, [])
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(verdicts):
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def verdict(request):
    """Record one acceptance criterion's outcome and fail the test if bad."""
    def record(number, ok, detail):
        ok = bool(ok)
        request.config.stash[_VERDICTS].append((number, ok, detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {number} failed: {detail}"
    return record


@pytest.fixture
def hand_example():
    return Dataset([1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 0.0, 1.0], [1, 3])

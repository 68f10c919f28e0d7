import numpy as np
import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict: ``criterion(number, passed, detail)``."""
    results = request.config.stash[ACCEPTANCE]
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def record(number: int, passed: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        results[number] = line
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[ACCEPTANCE]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])

import numpy as np
import pytest

from alphakmer import Alphabet, TimeSeriesDataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def az():
    return Alphabet()


@pytest.fixture
def two_signal_dataset():
    return TimeSeriesDataset.from_arrays([[0, 0, 26], [26, 26, 0]], ["x", "y"], ["a", "b"])


ACCEPTANCE_RESULTS = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    ACCEPTANCE_RESULTS[marker.args[0]] = (marker.args[1], call.excinfo is None)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, ok = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {title}")

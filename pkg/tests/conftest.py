import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from puretrees.core import Dataset

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.append((marker.kwargs["number"], marker.kwargs["title"], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, detail in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] {number:>2}. {title}"
        terminalreporter.write_line(line + (f"  -- {detail}" if detail else ""))


@pytest.fixture
def grid4():
    """Four points on the unit square, response 1 on the diagonal."""
    X = np.array([[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]])
    return Dataset.from_arrays(X, np.array([1.0, 0.0, 0.0, 1.0]))


@pytest.fixture
def line4():
    return Dataset.from_arrays(np.array([1.0, 2.0, 3.0, 4.0]), np.array([0.0, 0.0, 2.0, 2.0]))


def random_dataset(rng, n, d, discrete=False):
    if discrete:
        X = rng.integers(0, 4, size=(n, d)).astype(float)
        y = rng.integers(0, 3, size=n).astype(float)
    else:
        X = rng.random((n, d))
        y = rng.normal(size=n)
    return Dataset.from_arrays(X, y)

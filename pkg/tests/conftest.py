import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thermofocus.frames import frame_from_values  # noqa: E402


def delta_frame(size, value=100):
    vals = [0] * (size * size)
    vals[(size // 2) * size + size // 2] = value
    return frame_from_values(size, size, vals)


@pytest.fixture
def delta5():
    return delta_frame(5)


@pytest.fixture
def delta7():
    return delta_frame(7)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def default_experiment():
    from thermofocus.simulate import ExperimentSpec, generate_experiment

    return generate_experiment(ExperimentSpec())


@pytest.fixture(scope="session")
def default_curves(default_experiment):
    from thermofocus.measures import focus_curve

    return [focus_curve(s) for s in default_experiment]

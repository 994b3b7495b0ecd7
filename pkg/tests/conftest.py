import json
import os
import shutil

import numpy as np
import pytest

from phaselab.geometry import make_admissible_arc, make_curve, make_layout, make_profile

DATA = os.path.join(os.path.dirname(__file__), "data")
CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


@pytest.fixture(scope="session")
def frozen():
    with open(os.path.join(DATA, "oracle_values.json")) as fh:
        return json.load(fh)


def standard_layout(k=1.0, n=16):
    g = make_admissible_arc((0.0, 3.0), 0.5, (np.pi, 2 * np.pi), n, k)
    s = make_admissible_arc((3.0, 0.0), 0.5, (0.5 * np.pi, 1.5 * np.pi), n, k)
    return make_layout(g, s, k)


def rough_layout(k=2.0, n=16):
    g = make_admissible_arc((-1.5, 2.0), 0.5, (np.pi, 2 * np.pi), n, k)
    s = make_admissible_arc((1.5, 2.0), 0.5, (np.pi, 2 * np.pi), n, k)
    return make_layout(g, s, k)


@pytest.fixture(scope="session")
def layout():
    return standard_layout()


@pytest.fixture(scope="session")
def surface_layout():
    return rough_layout()


@pytest.fixture(scope="session")
def unit_circle():
    return make_curve("circle", {"radius": 1.0}, 64)


@pytest.fixture(scope="session")
def kite():
    return make_curve("kite", {"scale": 1.0}, 128)


@pytest.fixture(scope="session")
def bump():
    return make_profile(-1.0, 1.0, 0.3)


@pytest.fixture
def baseline_copy(tmp_path, monkeypatch):
    """Point the baseline store at a scratch copy so tests never touch the packaged file."""
    from phaselab.cli.report import baseline_path

    dst = tmp_path / "baselines.yaml"
    shutil.copy(baseline_path(), dst)
    monkeypatch.setenv("PHASELAB_BASELINES", str(dst))
    return dst


def config_path(name):
    return os.path.abspath(os.path.join(CONFIGS, name))


ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion; the lines are echoed at session end."""
    def record(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {title}: {detail}"
        ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from surface_flows import build_group  # noqa: E402
from surface_flows.io import load_graph  # noqa: E402

MATRIX_GRAPHS = ["loop", "digon", "theta", "theta_torus", "k4", "bouquet2", "bouquet4", "dumbbell"]
MATRIX_GROUPS = ["cyclic:2", "cyclic:3", "cyclic:4", "symmetric:3", "dihedral:4", "quaternion"]

from _report import LINES as ACCEPTANCE_LINES  # noqa: E402


@pytest.fixture(scope="session")
def graphs():
    return {name: load_graph(name) for name in MATRIX_GRAPHS + ["bouquet0"]}


@pytest.fixture(scope="session")
def groups():
    return {spec: build_group(spec) for spec in MATRIX_GROUPS}


@pytest.fixture
def graph_file(tmp_path):
    def write(doc, name="g.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

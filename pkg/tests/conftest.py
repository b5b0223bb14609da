import sys
from pathlib import Path

import pytest

from qbs.io import read_setting
from qbs.quiver_core import QuiverSetting

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixture_setting():
    def load(name):
        return read_setting(FIXTURES / f"{name}.json")
    return load


def build(dims, arrows):
    return QuiverSetting.build(dims, arrows)


def cyc(*names):
    return [(names[i], names[(i + 1) % len(names)]) for i in range(len(names))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

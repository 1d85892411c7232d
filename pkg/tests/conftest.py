import json
from pathlib import Path

import pytest

from morphshop.model import MorphModel, load_model_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_fixture(name: str) -> dict:
    return json.loads(fixture_path(name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def motor_vehicle() -> MorphModel:
    return load_model_file(str(fixture_path("motor-vehicle.json")))


@pytest.fixture(scope="session")
def extended_product() -> MorphModel:
    return load_model_file(str(fixture_path("extended-product.json")))


@pytest.fixture(scope="session")
def repair_plan() -> MorphModel:
    return load_model_file(str(fixture_path("repair-plan.json")))


@pytest.fixture(scope="session")
def computer() -> MorphModel:
    return load_model_file(str(fixture_path("computer.json")))


@pytest.fixture(scope="session")
def car() -> MorphModel:
    return load_model_file(str(fixture_path("car.json")))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                lines.append((report.nodeid.split("::")[-1], outcome.upper()))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")

from __future__ import annotations

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from nlcdim import formats

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", deadline=None, max_examples=15,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).resolve().parent / "fixtures"
FIXTURE_NAMES = sorted(p.stem for p in FIXTURES.glob("*.nlc"))

# filled by the acceptance suite, printed at the end of the run
ACCEPTANCE_LINES: dict = {}


def load_fixture(name: str):
    n = formats.read_nlc((FIXTURES / f"{name}.nlc").read_text(), source=f"{name}.nlc")
    s = formats.read_split((FIXTURES / f"{name}.split").read_text(), source=f"{name}.split")
    _, p = formats.read_poset((FIXTURES / f"{name}.poset").read_text(), source=f"{name}.poset")
    return n, s, p


@pytest.fixture(scope="session")
def fixture_loader():
    return load_fixture


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

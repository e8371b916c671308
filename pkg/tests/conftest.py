import os

import pytest

from pbcert.cycles import find_cycle
from pbcert.flow import Section
from pbcert.sysmodel import brusselator, circle_system, van_der_pol


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PBCERT_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="long tier: set PBCERT_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def vdp_cycle():
    return find_cycle(van_der_pol(1), Section((0, 0), (1, 0), r_min="1/10"), (1.5, 2.5))


@pytest.fixture(scope="session")
def circle_cycle():
    return find_cycle(circle_system(), Section((0, 0), (1, 0), r_min="1/10"), (0.5, 2.0))


@pytest.fixture(scope="session")
def bruss_cycle():
    return find_cycle(brusselator(1, 3), Section((0, 3), (1, 0), r_min=1), (2.0, 2.6))


ACCEPTANCE_LINES: dict = {}
PROPERTY_OUTCOMES: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_property_" in report.nodeid and report.when == "call":
        PROPERTY_OUTCOMES[report.nodeid] = report.outcome


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES[number] = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {title}" + (
        f"  [{detail}]" if detail else "")
    print(ACCEPTANCE_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is not None:
        # parametrized criteria pass only if every case passes
        ok = report.passed and _criteria.get(marker, "PASS") == "PASS"
        _criteria[marker] = "PASS" if ok else "FAIL"


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test with its criterion label for the summary."""
    def tag(label: str) -> None:
        record_property("criterion", label)
    return tag


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_criteria[label]}  {label}")

"""Shared fixtures plus a terminal summary for the acceptance suite."""

import pytest

from fdroof import BUILTIN_EQUATIONS, BUILTIN_MACHINES


@pytest.fixture
def xeon():
    return BUILTIN_MACHINES["xeon-e5-2697v2-2s"]


@pytest.fixture
def phi():
    return BUILTIN_MACHINES["phi-7120a"]


@pytest.fixture
def gtx480():
    return BUILTIN_MACHINES["gtx480"]


@pytest.fixture
def acoustic():
    return BUILTIN_EQUATIONS["acoustic"]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, ()):
            if "test_acceptance" not in str(getattr(rep, "nodeid", "")):
                continue
            name = rep.nodeid.split("::")[-1]
            if not name.startswith("test_criterion"):
                continue
            label = name.replace("test_criterion_", "").replace("_", " ")
            status = "PASS" if outcome == "passed" else "FAIL"
            lines[label] = status
    if lines:
        terminalreporter.section("acceptance criteria")
        for label in sorted(lines):
            terminalreporter.write_line(f"criterion {label}: {lines[label]}")

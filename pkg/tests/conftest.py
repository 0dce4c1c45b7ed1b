"""Shared fixtures plus the acceptance-criteria summary hook.

Acceptance tests register one human-readable PASS/FAIL line per criterion;
the lines are echoed in the terminal summary so a plain ``pytest -v`` run
shows the verdict for every criterion in one place.
"""

import numpy as np
import pytest

_CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, verdict: str, detail: str) -> None:
    _CRITERION_LINES[number] = f"criterion {number}: {verdict} - {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

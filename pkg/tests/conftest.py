"""Shared test plumbing: the acceptance-criteria result banner.

Acceptance tests record exactly one line per criterion through the
`acceptance` fixture; the terminal-summary hook replays them at the end
of the run so the pass/fail verdicts are visible in normal output.
"""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one PASS/FAIL line for a criterion, then enforce it."""

    def record(criterion: int, ok: bool, detail: str):
        verdict = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {criterion}: {verdict} - {detail}")
        assert ok, f"criterion {criterion}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)

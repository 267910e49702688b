"""Shared test fixtures plus the acceptance-report hook.

Acceptance tests register one line per criterion via :func:`record`;
the lines are printed in the terminal summary so pass/fail status is
visible even for passing tests under default output capture.
"""

ACCEPTANCE_LINES = []


def record(criterion: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    line = f"CRITERION {criterion}: {status} - {detail}"
    ACCEPTANCE_LINES.append((criterion, line))
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)

"""Collects the one-line acceptance reports and echoes them in the
terminal summary, so they are visible without disabling capture."""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance report")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)

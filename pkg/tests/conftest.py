"""Acceptance scoreboard shared between test_acceptance and the reporter.

test_acceptance records one entry per headline check; the hook below prints
them after the run so every session ends with a PASS/FAIL line per check.
"""

ACCEPTANCE: list[tuple[str, bool]] = []


def record(label: str, ok: bool) -> None:
    ACCEPTANCE.append((label, ok))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance checks")
    for label, ok in ACCEPTANCE:
        terminalreporter.write_line(("PASS" if ok else "FAIL") + "  " + label)

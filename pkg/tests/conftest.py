import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criteria verdict lines even when capture is on."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from helpers import ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    # verdicts recorded by the acceptance suite, echoed after the run so they
    # appear even when output capture is on
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

# One line per acceptance criterion, echoed after the run so the pass/fail
# verdicts stay visible even though pytest captures test stdout.
acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_report():
    return acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)

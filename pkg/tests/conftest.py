import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Call with (number, passed, summary); the line is echoed in the terminal summary."""

    def record(number, passed, summary):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {summary}"
        _CRITERIA.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)

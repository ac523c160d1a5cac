import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line: ``criterion(label, passed, detail)``."""

    def note(label, passed, detail):
        _LINES.append((label, bool(passed), detail))
        return passed

    return note


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _LINES:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")

import pytest

_criteria = []


@pytest.fixture(scope="session")
def report():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(name, passed, detail):
        _criteria.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

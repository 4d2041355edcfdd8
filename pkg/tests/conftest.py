import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)

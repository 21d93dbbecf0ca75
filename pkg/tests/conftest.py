import pytest

_AC_LINES: dict = {}


def record_ac(key: str, passed: bool, detail: str) -> None:
    _AC_LINES[key] = f"{key} {'PASS' if passed else 'FAIL'}: {detail}"


@pytest.fixture
def ac_line():
    return record_ac


def pytest_terminal_summary(terminalreporter):
    if not _AC_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_AC_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(_AC_LINES[key])

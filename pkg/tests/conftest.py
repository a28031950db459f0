import pytest

from smalehom import fixtures

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def pairs():
    return {k: f() for k, f in fixtures.PAIRS.items()}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])

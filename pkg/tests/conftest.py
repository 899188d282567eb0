import pytest

from pds_atlas.classify import classify

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def cat4():
    return classify(4)


@pytest.fixture(scope="session")
def cat3():
    return classify(3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

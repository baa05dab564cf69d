import pytest

from ansulator.category import builtin_category


@pytest.fixture(scope="session")
def fib():
    return builtin_category("fibonacci")


@pytest.fixture(scope="session")
def ising():
    return builtin_category("ising")


@pytest.fixture(scope="session")
def toric():
    return builtin_category("toric")


@pytest.fixture(scope="session")
def semion():
    return builtin_category("semion")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

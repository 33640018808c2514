import pytest

from mulcomp.arith import build_factor_table


@pytest.fixture(scope="session")
def table():
    return build_factor_table(10**6)


@pytest.fixture(scope="session")
def small_table():
    return build_factor_table(10**4)


ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LOG, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

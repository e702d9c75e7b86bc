import pytest

from ladderwork import AlphaPolicy, run_ladder

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def p3():
    return run_ladder(3, 4, AlphaPolicy("smallest"), 12)


@pytest.fixture(scope="session")
def p5():
    return run_ladder(5, 2, AlphaPolicy("smallest"), 10)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])

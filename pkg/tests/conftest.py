import pytest

from seifert_wrt.numerics import PrecisionCtx
from seifert_wrt.seifert import validate_seifert


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(50)


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionCtx(30)


@pytest.fixture(scope="session")
def d235():
    return validate_seifert((2, 3, 5))


@pytest.fixture(scope="session")
def d435():
    return validate_seifert((4, 3, 5))


@pytest.fixture(scope="session")
def d2357():
    return validate_seifert((2, 3, 5, 7))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

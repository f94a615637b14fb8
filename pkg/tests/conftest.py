import pytest
from hypothesis import HealthCheck, settings

from opbkit import corpus

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def s1():
    return corpus.load("s1")


@pytest.fixture(scope="session")
def s2():
    return corpus.load("s2")


@pytest.fixture(scope="session")
def tiles():
    return corpus.load("tiles")


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])

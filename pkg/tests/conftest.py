import pytest

from algcantor.builder import Caps, build


@pytest.fixture(scope="session")
def standard3():
    return build("standard", Caps(k_max=3, n_max=2, budget=100_000))


@pytest.fixture(scope="session")
def free3():
    return build("free", Caps(k_max=3, n_max=2, budget=100_000))


@pytest.fixture(scope="session")
def free4():
    return build("free", Caps(k_max=4, n_max=2, budget=100_000))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

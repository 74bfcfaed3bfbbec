import pytest

from withholding_game import GameParameters


@pytest.fixture
def mixed_params():
    return GameParameters(p=0.4, epsilon=0.05, R_w=10.0, b_d=6.0, C_d=1.2, C_n=0.6)


@pytest.fixture
def small_rw_params():
    return GameParameters(p=0.4, epsilon=0.05, R_w=1.0, b_d=6.0, C_d=1.2, C_n=0.6)


@pytest.fixture
def small_bd_params():
    return GameParameters(p=0.4, epsilon=0.05, R_w=10.0, b_d=2.0, C_d=1.2, C_n=0.6)


_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def report_line(request):
    """Print a criterion verdict now and repeat it in the terminal summary."""
    lines = request.config.stash[_LINES_KEY]

    def emit(text):
        print(text)
        lines.append(text)

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

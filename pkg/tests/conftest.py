import pytest

from prunedseg.pruned import available_backends


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def example_signal():
    return [0.0, 0.5, 0.4, -0.5]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

from vbass.exactalg import GradedRing
from vbass.veronese import veronese_ring


@pytest.fixture
def R():
    """ℚ[x,y], standard graded."""
    return GradedRing(["x", "y"])


@pytest.fixture
def T():
    return GradedRing(["x", "y", "z"])


@pytest.fixture
def V2(R):
    return veronese_ring(R, 2)


@pytest.fixture
def V3(R):
    return veronese_ring(R, 3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:  # pragma: no cover
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])

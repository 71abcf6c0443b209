import pytest

from ffmean import batch
from ffmean.field import make_field


@pytest.fixture(scope="session")
def F5():
    return make_field(5)


@pytest.fixture(scope="session")
def F13():
    return make_field(13)


_BLOCKS = {}


def ensemble_block(q, g):
    """Batch L-data for the whole ensemble, shared across test modules."""
    if (q, g) not in _BLOCKS:
        _BLOCKS[(q, g)] = batch.compute_ensemble(q, g)
    return _BLOCKS[(q, g)]


@pytest.fixture(scope="session")
def blocks():
    return ensemble_block


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def report(label: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

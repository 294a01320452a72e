import numpy as np
import pytest

from rkhs_sampling import (
    EmbeddingContext,
    FourierSeriesKernel,
    SzegoKernel,
    UniformDisk,
    UniformInterval,
)

ACCEPTANCE_LINES = []


@pytest.fixture
def fourier():
    return FourierSeriesKernel.geometric(0.5, 64)


@pytest.fixture
def szego():
    return SzegoKernel(128)


@pytest.fixture
def fctx(fourier):
    return EmbeddingContext(fourier, UniformInterval())


@pytest.fixture
def hctx(szego):
    return EmbeddingContext(szego, UniformDisk())


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def criterion():
    """Record one acceptance line; returns ``ok`` so tests can assert on it."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

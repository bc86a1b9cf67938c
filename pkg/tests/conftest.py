import pytest

from seqcover.domain import FiniteTable, Interval1D, Monotone1D, SparseIndicator, Threshold1D

# the 5-hypothesis table on 3 points used throughout: rows are hypotheses,
# columns the three domain points
FIG1_ROWS = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 1, 0],
    [1, 1, 0],
    [1, 1, 1],
]


@pytest.fixture
def fig1():
    return FiniteTable(FIG1_ROWS)


@pytest.fixture
def thresholds10():
    return Threshold1D(grid_denominator=10)


@pytest.fixture
def thresholds_fine():
    return Threshold1D(grid_denominator=2**20)


@pytest.fixture
def intervals10():
    return Interval1D(grid_denominator=9)


@pytest.fixture
def monotone_small():
    return Monotone1D(grid_denominator=16, value_denominator=4)

from pathlib import Path

import pytest
from hypothesis import settings

from movestruct.intervals import intervals_from_permutation
from movestruct.oracle import naive_suffix_structures
from movestruct.rlbwt import Rlbwt

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

PI_A = [4, 5, 6, 7, 0, 1, 2, 3]
PI_B = [6, 7, 8, 9, 10, 11, 5, 4, 3, 2, 1, 0]

# acceptance lines collected by test_acceptance, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def banana():
    return naive_suffix_structures("banana$")


@pytest.fixture
def banana_rlbwt(banana):
    return Rlbwt.from_bwt(banana.BWT)


@pytest.fixture
def map_a():
    return intervals_from_permutation(PI_A)


@pytest.fixture
def map_b():
    return intervals_from_permutation(PI_B)

import pathlib
import random

import pytest

from bddinfo import BddManager

DATA = pathlib.Path(__file__).parent / "data"

EXAMPLE1_VECTOR = "10001111"   # f = x1 or (not x2 and not x3)

# Frozen via the truth-table oracle (tests/test_oracle.py re-derives them).
H_F = 0.954434002924965
H_F_X1 = 0.4056390622295664
H_F_X2 = 0.9056390622295664
H_F_X1X2 = 0.25


@pytest.fixture
def example1():
    manager = BddManager(3)
    root = manager.build_from_truth_vector(EXAMPLE1_VECTOR)
    manager.register_root(root)
    return manager, root


def random_function(rng: random.Random, n: int) -> str:
    return "".join(rng.choice("01") for _ in range(1 << n))


@pytest.fixture
def rng():
    return random.Random(0xBDD)

import random

import pytest

from lrshare import protocol
from lrshare.field import DEFAULT_MODULUS, PrimeField

# The 12-node toy deployment used throughout: (8, 12) sharing, 3 groups of 4.
TOY = dict(k=8, n=12, m=3, secret=42, seed=7)


@pytest.fixture(scope="session")
def gf13():
    return PrimeField(13)


@pytest.fixture(scope="session")
def big_field():
    return PrimeField(DEFAULT_MODULUS)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def toy_system():
    return protocol.system_setup(**TOY)


@pytest.fixture
def reciprocal_system():
    return protocol.system_setup(**TOY, placement=protocol.PLACEMENT_RECIPROCAL)


@pytest.fixture
def bare_system():
    return protocol.system_setup(**TOY, placement=protocol.PLACEMENT_NONE)

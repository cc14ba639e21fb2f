import os
from pathlib import Path

import pytest

os.environ.setdefault("ENV", "test")
os.environ.setdefault("LOG_LEVEL", "WARNING")

from app.models.germFile import CoxeterFamily, CoxeterSpec
from app.services.builders import classical_artin, dual_artin

FIXTURES = Path(__file__).parent / "fixtures"


def spec(family: str, rank: int) -> CoxeterSpec:
    return CoxeterSpec(family=CoxeterFamily(family), rank=rank)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def a2():
    return classical_artin(spec("A", 2))


@pytest.fixture(scope="session")
def a3():
    return classical_artin(spec("A", 3))


@pytest.fixture(scope="session")
def dual_a2():
    return dual_artin(spec("A", 2))


@pytest.fixture(scope="session")
def dual_a3():
    return dual_artin(spec("A", 3))


@pytest.fixture(scope="session")
def dual_i2():
    cache = {}

    def build(m: int):
        if m not in cache:
            cache[m] = dual_artin(spec("I2", m))
        return cache[m]

    return build


@pytest.fixture(scope="session")
def b2():
    return classical_artin(spec("I2", 4))

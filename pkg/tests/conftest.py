"""Shared fixtures: rings, the ideal-file corpus and clean engine counters"""
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

import groebner  # noqa: E402
from arith import PrimeField, Rationals, gf25  # noqa: E402
from ideal_file import load_ideal_file  # noqa: E402
from poly import Ring  # noqa: E402

FIXTURES = ROOT / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def load_fixture():
    """Load a fixture by file name"""
    def _load(name: str):
        return load_ideal_file(FIXTURES / name)
    return _load


@pytest.fixture
def qq():
    return Rationals()


@pytest.fixture
def gf5():
    return PrimeField(5)


@pytest.fixture
def gf25_field():
    return gf25()


@pytest.fixture
def det_ring(qq):
    return Ring(qq, ("x00", "x01", "x10", "x11"))


@pytest.fixture(autouse=True)
def reset_stats():
    groebner.stats.reset()
    yield

from pathlib import Path

import pytest

from nzalex.nz import prepare
from nzalex.triangulation import load_triangulation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture(scope="session")
def fig8():
    return prepare(load_triangulation(fixture("fig8.tri")), meridian="g4")


@pytest.fixture(scope="session")
def k82():
    return prepare(load_triangulation(fixture("k8_2.tri")))

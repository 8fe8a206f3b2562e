import json
from pathlib import Path

import pytest

from schottky_workbench.lattices import lattice_by_id

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / \
    "schottky_workbench" / "schemas"


def load_schema(name: str) -> dict:
    with open(SCHEMA_DIR / name, "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def e8():
    return lattice_by_id("E8")


@pytest.fixture(scope="session")
def d16():
    return lattice_by_id("D16plus")


@pytest.fixture(scope="session")
def e8e8():
    return lattice_by_id("E8E8")

"""
Pytest configuration and fixtures for testing
"""
import json
import os
import random
import sys

import pytest

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.config.settings import settings


@pytest.fixture
def catalog_path():
    """Path of the shipped curve catalog"""
    return settings.CATALOG_FILE


@pytest.fixture
def corrupted_catalog(tmp_path, catalog_path):
    """Catalog copy with e1 moved out of B1 and h13 given a wrong class"""
    with open(catalog_path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    for entry in data["curves"]:
        if entry["name"] == "e1":
            entry["branch"] = None
        if entry["name"] == "h13":
            entry["class"] = ["1", "-1", "-1", "0", "0"]
    path = tmp_path / "corrupted_catalog.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def corpus_dir():
    """Shipped certificate corpus"""
    return settings.corpus_dir()


@pytest.fixture
def rng():
    """Seeded random generator for property tests"""
    return random.Random(20240517)

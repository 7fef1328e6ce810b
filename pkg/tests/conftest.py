"""
Pytest configuration and fixtures for the heptagon toolkit tests.
"""

import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest
from dotenv import load_dotenv

# Load test environment variables
load_dotenv()

# Set test environment
os.environ["APP_ENV"] = "test"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running; enabled with HEPTAGON_RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("HEPTAGON_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow test; set HEPTAGON_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are re-read for every test so env overrides take effect."""
    from services.config import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Seeded numpy Generator."""
    return np.random.default_rng(20240607)


@pytest.fixture
def f2():
    from services.algebra.field import get_field

    return get_field(2, 1)


@pytest.fixture
def f3():
    from services.algebra.field import get_field

    return get_field(3, 1)


@pytest.fixture
def gf2_8():
    from services.algebra.field import get_field

    return get_field(2, 8)


@pytest.fixture
def gf2_15():
    from services.algebra.field import get_field

    return get_field(2, 15)


@pytest.fixture
def gf3_5():
    from services.algebra.field import get_field

    return get_field(3, 5)


@pytest.fixture
def gf3_9():
    from services.algebra.field import get_field

    return get_field(3, 9)


@pytest.fixture
def sphere5():
    """∂Δ⁶, the smallest 5-sphere."""
    from services.simplicial.complex import boundary_of_simplex

    return boundary_of_simplex(6)


@pytest.fixture
def s2xs3():
    from services.manifolds.catalog import resolve_manifold

    return resolve_manifold("S2xS3")


@pytest.fixture
def rp2():
    from services.manifolds.catalog import catalog_get

    return catalog_get("RP2").complex


@pytest.fixture
def klein():
    from services.manifolds.catalog import catalog_get

    return catalog_get("K").complex

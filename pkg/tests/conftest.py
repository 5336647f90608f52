import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from zkfhash import load_default, toy_params
from zkfhash.params import KINDS

VECTORS = Path(__file__).parent / "vectors"

settings.register_profile(
    "default", deadline=None, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def shipped():
    return {kind: load_default(kind) for kind in KINDS}


@pytest.fixture(scope="session")
def rescue_params(shipped):
    return shipped["rescue_prime"]


@pytest.fixture(scope="session")
def griffin_params(shipped):
    return shipped["griffin"]


@pytest.fixture(scope="session")
def rc_params(shipped):
    return shipped["reinforced_concrete"]


@pytest.fixture(scope="session")
def toys():
    """Toy sets over the default small prime."""
    return {kind: toy_params(kind) for kind in KINDS}


def load_kat(kind):
    return json.loads((VECTORS / f"kat_{kind}.json").read_text())

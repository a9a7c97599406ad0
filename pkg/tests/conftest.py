import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from bridgewalk.walk_models import make_model  # noqa: E402
from config import get_settings  # noqa: E402


@pytest.fixture(scope="session")
def settings():
    return get_settings()


@pytest.fixture(scope="session")
def tree2():
    return make_model({"kind": "tree", "b": 2})


@pytest.fixture(scope="session")
def tree3():
    return make_model({"kind": "tree", "b": 3})


@pytest.fixture(scope="session")
def line():
    return make_model({"kind": "lattice", "dim": 1})


@pytest.fixture(scope="session")
def line12():
    return make_model({"kind": "lattice", "dim": 1, "jumps": [1, 2]})


@pytest.fixture(scope="session")
def plane():
    return make_model({"kind": "lattice", "dim": 2})


@pytest.fixture(scope="session")
def cubic():
    return make_model({"kind": "lattice", "dim": 3})


@pytest.fixture(scope="session")
def lamp1():
    return make_model({"kind": "lamplighter", "dim": 1})

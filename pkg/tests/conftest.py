import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from socialrrt.model import ObjectGeometry, RobotGeometry  # noqa: E402
from socialrrt.scenario import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def office():
    return load_fixture("office")


@pytest.fixture(scope="session")
def generic():
    return load_fixture("generic")


@pytest.fixture
def unit_robot():
    return RobotGeometry(base_radius=0.3, link1_length=1.0, link2_length=1.0)


@pytest.fixture
def stub_object():
    return ObjectGeometry(((0.5, 0.0),))

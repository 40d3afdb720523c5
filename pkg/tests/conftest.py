from __future__ import annotations

import pytest

from src.wallcross.demos import pairing_two_scene, pentagon_scene
from src.wallcross.engine import Diagram, complete, initial_diagram
from src.wallcross.novikov import Truncation


@pytest.fixture
def energy20() -> Truncation:
    return Truncation.energy(20)


@pytest.fixture
def pentagon_initial() -> Diagram:
    return initial_diagram(pentagon_scene(Truncation.energy(20)))


@pytest.fixture(scope="session")
def pentagon_completed() -> Diagram:
    return complete(initial_diagram(pentagon_scene(Truncation.energy(20))))


@pytest.fixture(scope="session")
def pentagon_completed_degree() -> Diagram:
    return complete(initial_diagram(pentagon_scene(Truncation.degree(8))))


@pytest.fixture(scope="session")
def pairing_two_completed() -> Diagram:
    return complete(initial_diagram(pairing_two_scene(Truncation.degree(5))))

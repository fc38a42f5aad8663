"""
Test configuration and shared fixtures for the mixer synthesis tests.
"""

import numpy as np
import pytest

from app.mixer.subspace import FeasibleSet
from app.mixer.trotter import SynthesisOptions, synthesize
from tests.fixtures.reference_sets import (
    create_five_qubit_set,
    create_five_state_set,
    create_one_hot_set,
    create_orbit_set,
    create_seven_state_set,
)


@pytest.fixture
def five_qubit_set() -> FeasibleSet:
    return create_five_qubit_set()


@pytest.fixture
def seven_state_set() -> FeasibleSet:
    return create_seven_state_set()


@pytest.fixture
def five_state_set() -> FeasibleSet:
    return create_five_state_set()


@pytest.fixture
def orbit_set() -> FeasibleSet:
    return create_orbit_set()


@pytest.fixture
def one_hot_set() -> FeasibleSet:
    return create_one_hot_set()


@pytest.fixture
def exact_options() -> SynthesisOptions:
    """Exact selection with room for the seven-state candidate pool."""
    return SynthesisOptions(restrict=True, selection="exact", exact_limit=64, n_jobs=1)


@pytest.fixture
def seven_state_plan(seven_state_set, exact_options):
    return synthesize(seven_state_set, exact_options)


@pytest.fixture
def one_hot_plan(one_hot_set):
    return synthesize(one_hot_set, SynthesisOptions(n_jobs=1))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def write_feasible_file(tmp_path):
    """Write bitstrings to a feasible-set file and return its path."""
    def _write(bitstrings, name="feasible.txt"):
        path = tmp_path / name
        path.write_text("\n".join(bitstrings) + "\n", encoding="utf-8")
        return path
    return _write

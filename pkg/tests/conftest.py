import json
import os
import random

import pytest

from LatticeAvoid.config import Var
from LatticeAvoid.core.lattice_core import ExactLattice, SublatticeCoords
from LatticeAvoid.ideals import quadratic_field
from LatticeAvoid.utils.exceptions import SingularMatrix

_TUNABLES = ("PRECISION_CAP", "DEFAULT_PRECISION", "TIE_PRECISION", "MAX_DIMENSION", "MAX_DEGREE",
             "GRID_DEGREE_CAP", "ENUMERATION_BUDGET", "HMIN_NORM_CAP", "GENERATOR_CAP", "SWEEP_WORKERS")


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch):
    """Strip AVL_* variables and restore Var after every test."""
    for name in list(os.environ):
        if name.startswith("AVL_"):
            monkeypatch.delenv(name, raising=False)
    saved = {name: getattr(Var, name) for name in _TUNABLES}
    yield
    for name, value in saved.items():
        setattr(Var, name, value)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def gaussian():
    return quadratic_field(-1)


@pytest.fixture
def sqrt2():
    return quadratic_field(2)


@pytest.fixture
def sqrt5():
    return quadratic_field(5)


@pytest.fixture
def sqrt_minus5():
    return quadratic_field(-5)


@pytest.fixture
def z2():
    return ExactLattice.from_integer_columns([[1, 0], [0, 1]])


@pytest.fixture
def two_z2():
    return SublatticeCoords.from_generators([[2, 0], [0, 2]], 2)


@pytest.fixture
def diagonal_problem_file(tmp_path):
    """Z^2 avoiding 2Z^2 with P = x1 - x2."""
    path = tmp_path / "prob.json"
    path.write_text(json.dumps({
        "omega": [[1, 0], [0, 1]],
        "sublattices": [[[2, 0], [0, 2]]],
        "polynomial": [{"exponents": [1, 0], "coefficient": 1}, {"exponents": [0, 1], "coefficient": -1}],
    }))
    return path


@pytest.fixture
def random_lattice(rng):
    """Factory for nonsingular integer bases with entries in [-5, 5]."""
    def make(d: int) -> ExactLattice:
        while True:
            columns = [[rng.randint(-5, 5) for _ in range(d)] for _ in range(d)]
            try:
                return ExactLattice.from_integer_columns(columns)
            except SingularMatrix:
                continue
    return make

import json
from fractions import Fraction

import pytest

from LatticeAvoid.core.certified_reals import QuadValue
from LatticeAvoid.io.descriptors import (
    load_json,
    parse_field,
    parse_ideal,
    parse_ideal_task,
    parse_int,
    parse_lattice,
    parse_polynomial,
    parse_problem,
    parse_real,
    squarefree_range,
)
from LatticeAvoid.utils.exceptions import InvalidInput


def test_load_json_errors(tmp_path):
    with pytest.raises(InvalidInput):
        load_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InvalidInput):
        load_json(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(InvalidInput):
        load_json(listing)


def test_parse_int():
    assert parse_int("12", "x") == 12
    with pytest.raises(InvalidInput):
        parse_int(True, "x")
    with pytest.raises(InvalidInput):
        parse_int("1.5", "x")


def test_parse_real_forms():
    assert parse_real(3) == 3
    assert parse_real("3/4") == Fraction(3, 4)
    assert parse_real({"p": "1", "q": "1/2", "D": 5}) == QuadValue(1, Fraction(1, 2), 5)
    assert parse_real({"kind": "quadratic", "p": "0", "q": "2", "D": 2}) == QuadValue(0, 2, 2)
    assert parse_real({"p": 4, "q": 0, "D": 2}) == 4


@pytest.mark.parametrize("value", [True, "abc", {"p": 1, "q": 1, "D": 4}, {"p": 1}, [1]])
def test_parse_real_rejects(value):
    with pytest.raises(InvalidInput):
        parse_real(value)


def test_parse_field_caches_generic_fields():
    a = parse_field({"generic": {"poly": [-1, -1, 0, 1]}})
    b = parse_field({"poly": [-1, -1, 0, 1]})
    assert a is b
    assert parse_field({"quadratic": -5}).D == -5
    with pytest.raises(InvalidInput):
        parse_field({"cubic": 1})


def test_parse_ideal_descriptors(gaussian):
    q = parse_ideal({"quad": {"D": -1, "a": 2, "b": 1, "g": 1}})
    assert q.norm == 2
    assert parse_ideal({"generators": [[1, 1]]}, gaussian) == q
    assert parse_ideal({"zbasis": [[2, 0], [1, 1]]}, gaussian) == q
    with pytest.raises(InvalidInput):
        parse_ideal({"generators": [[1, 1]]})
    with pytest.raises(InvalidInput):
        parse_ideal({"quad": {"D": -1, "a": 2, "b": 1, "g": 1}}, parse_field({"quadratic": 2}))


def test_parse_lattice():
    L = parse_lattice({"columns": [[1, 0], [0, 1]], "complex_pairs": 1})
    assert L.norm_model.complex_pairs == 1
    with pytest.raises(InvalidInput):
        parse_lattice([[1, 2], [2, 4]])
    with pytest.raises(InvalidInput):
        parse_lattice([[1, 0], [0]])
    with pytest.raises(InvalidInput):
        parse_lattice({"columns": [[1]], "complex_pairs": 1})


def test_missing_polynomial_is_constant():
    P = parse_polynomial(None, 3)
    assert P.degree == 0
    with pytest.raises(InvalidInput):
        parse_polynomial([{"exponents": [1, 0]}], 2)


def test_parse_problem(diagonal_problem_file):
    problem = parse_problem(json.loads(diagonal_problem_file.read_text()))
    assert problem.D == 4
    assert problem.predicate.degree == 1
    with pytest.raises(InvalidInput):
        parse_problem({"omega": [[1]]})
    with pytest.raises(InvalidInput):
        parse_problem({"omega": [[1, 0], [0, 1]], "sublattices": [[[1, 1], [2, 2]]]})


def test_parse_ideal_task():
    field, ideal, avoid = parse_ideal_task({"field": {"quadratic": -1}, "avoid": [{"generators": [[1, 1]]}]})
    assert ideal.norm == 1
    assert [J.norm for J in avoid] == [2]
    with pytest.raises(InvalidInput):
        parse_ideal_task({"field": {"quadratic": -1}, "avoid": []})
    with pytest.raises(InvalidInput):
        parse_ideal_task({"avoid": [{"quad": {"D": -1, "a": 2, "b": 1, "g": 1}}]})


def test_squarefree_range():
    assert squarefree_range(-5, 6) == [-5, -3, -2, -1, 2, 3, 5, 6]
    assert squarefree_range(4, 4) == []

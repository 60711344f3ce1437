from fractions import Fraction
from itertools import islice

import pytest

from LatticeAvoid.avoidance import (
    AvoidanceProblem,
    SparsePolynomial,
    avoid_point,
    cn_select,
    grid_order,
    henk_thiel_witness,
    nullstellensatz_grids,
    positive_avoid_point,
    positive_grids,
)
from LatticeAvoid.bounds import BoundName
from LatticeAvoid.checker import verify_document
from LatticeAvoid.config import Var
from LatticeAvoid.core.certified_reals import QuadValue
from LatticeAvoid.core.lattice_core import ExactLattice, NormModel, SublatticeCoords
from LatticeAvoid.io.certificates import avoidance_document
from LatticeAvoid.utils.exceptions import (
    EnumerationBudgetExceeded,
    InvalidInput,
    NotContained,
    NotTotallyReal,
    NullstellensatzFailure,
)

X1_MINUS_X2 = SparsePolynomial.linear([1, -1])


def random_polynomial(rng, d):
    while True:
        terms = []
        for _ in range(rng.randint(1, 3)):
            exps = [0] * d
            for _ in range(rng.randint(1, 2)):
                exps[rng.randrange(d)] += 1
            terms.append((tuple(exps), rng.choice([-3, -2, -1, 1, 2, 3])))
        try:
            return SparsePolynomial(d, tuple(terms))
        except InvalidInput:
            continue


def random_sublattice(rng):
    while True:
        a, c, b = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2)
        if a * c >= 2:
            return SublatticeCoords.from_generators([[a, 0], [b, c]], 2)


class TestSparsePolynomial:
    def test_terms_are_merged_and_sorted(self):
        P = SparsePolynomial(2, (((1, 0), 2), ((0, 1), 1), ((1, 0), -2)))
        assert P.terms == (((0, 1), 1),)
        assert P.degree == 1

    def test_rejects_zero_and_bad_exponents(self):
        with pytest.raises(InvalidInput):
            SparsePolynomial(2, (((1, 0), 1), ((1, 0), -1)))
        with pytest.raises(InvalidInput):
            SparsePolynomial(2, (((1,), 1),))
        with pytest.raises(InvalidInput):
            SparsePolynomial(1, (((-1,), 1),))

    def test_exact_evaluation(self):
        P = SparsePolynomial(2, (((2, 0), 1), ((0, 0), -2)))
        assert P.evaluate((QuadValue(0, 1, 2), Fraction(0))) == 0
        assert not P.nonzero((0, 0), (QuadValue(0, 1, 2), Fraction(0)))
        assert P.nonzero((1, 0), (Fraction(1), Fraction(0)))

    def test_description(self):
        assert X1_MINUS_X2.describe() == {
            "kind": "polynomial", "variables": 2,
            "terms": [{"exponents": [0, 1], "coefficient": -1}, {"exponents": [1, 0], "coefficient": 1}],
        }


class TestGrids:
    def test_nullstellensatz_grid_values(self):
        first, second = nullstellensatz_grids(1, 4, 2)
        assert sorted(v for v, _ in first) == [-3, 1, 5]
        assert sorted(v for v, _ in second) == [-1, 0, 1]

    def test_positive_grid_sizes(self):
        first, second = positive_grids(3, 2, 2)
        assert [v for v, _ in first] == [1, 3, 5, 7]
        assert [v for v, _ in second] == [0, 1, 2, 3]

    def test_walk_order(self):
        walk = list(islice(grid_order(nullstellensatz_grids(1, 4, 2)), 6))
        assert walk == [(1, 0), (1, 1), (1, -1), (-3, 0), (-3, 1), (-3, -1)]

    def test_walk_covers_the_grid_once(self):
        grids = nullstellensatz_grids(2, 3, 2)
        walk = list(grid_order(grids))
        assert len(walk) == len(set(walk)) == len(grids[0]) * len(grids[1])
        assert all((xi[0] - 1) % 3 == 0 for xi in walk)


class TestSelection:
    def test_first_grid_point_with_nonzero_value(self, z2):
        xi, z = cn_select(z2, (0, 1), [(2, 0)], SparsePolynomial.linear([1, 0]), nullstellensatz_grids(1, 2, 2))
        assert xi == (1, 1)
        assert z.coords == (2, 1)

    def test_dependent_vectors(self, z2):
        with pytest.raises(InvalidInput):
            cn_select(z2, (1, 0), [(2, 0)], X1_MINUS_X2, nullstellensatz_grids(1, 2, 2))

    def test_budget(self, z2):
        Var.ENUMERATION_BUDGET = 1
        with pytest.raises(EnumerationBudgetExceeded):
            cn_select(z2, (0, 1), [(2, 0)], SparsePolynomial.linear([1, 0]), nullstellensatz_grids(1, 2, 2))

    def test_grid_too_small_for_the_degree(self):
        omega = ExactLattice.from_integer_columns([[1]])
        P = SparsePolynomial(1, (((3,), 1), ((1,), -1)))
        with pytest.raises(NullstellensatzFailure):
            cn_select(omega, (1,), [], P, [[(1, 0), (-1, 1)]])


class TestProblem:
    def test_requires_a_proper_sublattice(self, z2):
        with pytest.raises(InvalidInput):
            AvoidanceProblem(z2, [], X1_MINUS_X2)
        with pytest.raises(InvalidInput):
            AvoidanceProblem(z2, [SublatticeCoords(((1, 0), (0, 1)))], X1_MINUS_X2)

    def test_core_must_be_inside_every_sublattice(self, z2, two_z2):
        with pytest.raises(NotContained):
            AvoidanceProblem(z2, [two_z2], X1_MINUS_X2, core=SublatticeCoords(((1, 1), (0, 2))))

    def test_index_of_the_intersection(self, z2, two_z2):
        three = SublatticeCoords.from_generators([[3, 0], [0, 3]], 2)
        problem = AvoidanceProblem(z2, [two_z2, three], X1_MINUS_X2)
        assert problem.D == 36
        assert problem.indices == [4, 9]

    def test_henk_thiel_witness(self, z2, two_z2):
        witness = henk_thiel_witness(AvoidanceProblem(z2, [two_z2], X1_MINUS_X2))
        assert witness.point.coords == (1, 0)
        assert witness.bound == Fraction(5, 2)
        assert not witness.at_bound


class TestAvoidPoint:
    def test_unit_square_lattice(self, z2, two_z2):
        cert = avoid_point(AvoidanceProblem(z2, [two_z2], X1_MINUS_X2))
        assert cert.z == (1, 0)
        assert cert.xi == (1, 0)
        assert cert.witness == (1, 0)
        assert cert.bound == 35
        assert cert.bound_name is BoundName.AVOIDANCE
        assert cert.passed
        assert cert.flags == []

    def test_cubic_on_the_integers(self):
        omega = ExactLattice.from_integer_columns([[1]])
        evens = SublatticeCoords.from_generators([[2]], 1)
        P = SparsePolynomial(1, (((3,), 1), ((1,), -1)))
        cert = avoid_point(AvoidanceProblem(omega, [evens], P))
        assert cert.z == (3,)
        assert cert.passed

    def test_complex_norm_model(self):
        omega = ExactLattice([[1, 0], [0, 1]], NormModel(0, 1))
        sub = SublatticeCoords.from_generators([[2, 0], [0, 2]], 2)
        cert = avoid_point(AvoidanceProblem(omega, [sub], X1_MINUS_X2))
        assert cert.passed
        assert not sub.contains(cert.z)

    def test_random_problems(self, rng, random_lattice):
        for _ in range(8):
            problem = AvoidanceProblem(random_lattice(2), [random_sublattice(rng)], random_polynomial(rng, 2))
            cert = avoid_point(problem)
            assert cert.passed, [c.name for c in cert.checks if not c.passed]
            assert verify_document(avoidance_document(cert, problem)).passed

    @pytest.mark.slow
    def test_random_problems_two_sublattices(self, rng, random_lattice):
        for _ in range(40):
            subs = [random_sublattice(rng) for _ in range(2)]
            problem = AvoidanceProblem(random_lattice(2), subs, random_polynomial(rng, 2))
            cert = avoid_point(problem)
            assert cert.passed, [c.name for c in cert.checks if not c.passed]
            assert verify_document(avoidance_document(cert, problem)).passed


class TestPositiveAvoidPoint:
    def test_unit_square_lattice(self, z2, two_z2):
        cert = positive_avoid_point(AvoidanceProblem(z2, [two_z2], X1_MINUS_X2))
        assert cert.z == (1, 0)
        assert cert.bound_name is BoundName.POSITIVE_AVOIDANCE
        assert cert.flags == ["conservative-bound", "witness-already-positive"]
        assert cert.inputs["anchor"] == [2, 2]
        assert cert.inputs["u_vectors"] == [[4, 2]]
        assert cert.inputs["shift"] == 0
        assert cert.bound == QuadValue(78, 78, 2)
        assert cert.passed

    def test_negative_witness_is_shifted(self):
        omega = ExactLattice.from_integer_columns([[-1, 0], [0, -1]])
        sub = SublatticeCoords.from_generators([[2, 0], [0, 2]], 2)
        cert = positive_avoid_point(AvoidanceProblem(omega, [sub], SparsePolynomial.constant(2)))
        assert "witness-already-positive" not in cert.flags
        assert cert.inputs["shift"] >= 1
        assert all(v >= 0 for v in cert.ambient)
        assert cert.passed

    def test_complex_lattice_is_rejected(self):
        omega = ExactLattice([[1, 0], [0, 1]], NormModel(0, 1))
        sub = SublatticeCoords.from_generators([[2, 0], [0, 2]], 2)
        with pytest.raises(NotTotallyReal):
            positive_avoid_point(AvoidanceProblem(omega, [sub], X1_MINUS_X2))

    def test_random_problems(self, rng, random_lattice):
        for _ in range(5):
            problem = AvoidanceProblem(random_lattice(2), [random_sublattice(rng)], random_polynomial(rng, 2))
            cert = positive_avoid_point(problem)
            assert cert.passed, [c.name for c in cert.checks if not c.passed]
            assert all(v >= 0 for v in cert.ambient)
            assert verify_document(avoidance_document(cert, problem)).passed

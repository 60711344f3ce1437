import pytest

from LatticeAvoid.core import certified_reals as cr
from LatticeAvoid.core.certified_reals import QuadValue
from LatticeAvoid.core.nf_core import NumberField
from LatticeAvoid.ideals import (
    IntegralIdeal,
    NormForm,
    QuadIdeal,
    canonical_ideals,
    closed_form_height,
    ideal_det_consistent,
    ideal_lattice,
    ideal_norm,
    ideal_product,
    ideal_sublattice,
    norm_form,
    quad_canonical,
)
from LatticeAvoid.utils.exceptions import InvalidInput, InvariantViolation, NotAnIdeal, NotContained


@pytest.fixture
def prime_over_2():
    """The non-principal prime (2, 1 + delta) of Q(sqrt(-5))."""
    return quad_canonical(-5, 2, 1, 1)


class TestCanonicalBasis:
    def test_from_raw_triple(self, prime_over_2):
        assert (prime_over_2.a, prime_over_2.b, prime_over_2.g) == (2, 1, 1)
        assert prime_over_2.norm == 2
        assert ideal_norm(prime_over_2) == 2

    def test_from_zbasis_reduces_b(self):
        q = quad_canonical(-5, zbasis=[(2, 0), (3, 1)])
        assert (q.a, q.b, q.g) == (2, 1, 1)

    def test_invariants(self):
        with pytest.raises(InvariantViolation):
            QuadIdeal(-5, 2, 3, 1)
        with pytest.raises(InvariantViolation):
            QuadIdeal(-5, 4, 1, 2)
        with pytest.raises(InvariantViolation):
            QuadIdeal(-5, 0, 0, 1)

    def test_rejects_modules_that_are_not_ideals(self):
        with pytest.raises(NotAnIdeal):
            quad_canonical(-5, 2, 0, 1)

    def test_needs_a_triple_or_basis(self):
        with pytest.raises(InvalidInput):
            quad_canonical(-5, 2)

    def test_enumeration(self):
        found = [(q.a, q.b, q.g) for q in canonical_ideals(-5, 2)]
        assert found == [(1, 0, 1), (2, 0, 2), (2, 1, 1)]

    def test_enumeration_restricted_to_g(self):
        assert all(q.g == 1 for q in canonical_ideals(-5, 6, [1]))

    def test_closed_form_norm(self, prime_over_2):
        assert not prime_over_2.closed_form_mismatch
        unit = quad_canonical(5, 1, 0, 1)
        assert unit.norm == 1
        assert unit.closed_form_mismatch


class TestIdealArithmetic:
    def test_square_of_prime_over_2(self, prime_over_2):
        square = ideal_product(prime_over_2, prime_over_2)
        assert isinstance(square, QuadIdeal)
        assert (square.a, square.b, square.g) == (2, 0, 2)
        assert square.norm == 4

    def test_products_multiply_norms(self, sqrt5):
        I = IntegralIdeal.principal(sqrt5, (2, 1))
        J = IntegralIdeal.principal(sqrt5, (3, 0))
        assert (I * J).norm == I.norm * J.norm == 45

    def test_principal_and_unit(self, gaussian):
        assert IntegralIdeal.unit(gaussian).norm == 1
        I = IntegralIdeal.principal(gaussian, (1, 1))
        assert I.norm == 2
        assert I.contains((2, 0))
        assert not I.contains((1, 0))
        assert I.descriptor() == {"quad": {"D": -1, "a": 2, "b": 1, "g": 1}}

    def test_zero_generators(self, gaussian):
        with pytest.raises(InvalidInput):
            IntegralIdeal.from_generators(gaussian, [(0, 0)])

    def test_sublattice_coordinates(self, prime_over_2):
        unit = quad_canonical(-5, 1, 0, 1)
        assert ideal_sublattice(unit, prime_over_2).index == 2
        with pytest.raises(NotContained):
            ideal_sublattice(prime_over_2, unit)

    def test_generic_field_ideal(self):
        K = NumberField.generic([-1, -1, 0, 1])
        I = IntegralIdeal.principal(K, (2, 0, 0))
        assert I.norm == 8
        assert I.descriptor() == {"zbasis": [[2, 0, 0], [0, 2, 0], [0, 0, 2]]}


class TestLatticesAndForms:
    def test_ideal_lattice_determinant(self, prime_over_2):
        L = ideal_lattice(prime_over_2)
        assert L.norm_model.complex_pairs == 1
        assert L.determinant == QuadValue(0, 4, 5)
        assert ideal_det_consistent(prime_over_2, L)

    def test_real_ideal_lattice(self, sqrt2):
        L = ideal_lattice(IntegralIdeal.unit(sqrt2))
        assert cr.consistent(L.determinant, QuadValue(0, 2, 2))

    def test_norm_form(self, prime_over_2):
        form, H = norm_form(prime_over_2)
        assert form == NormForm(2, 2, 3)
        assert H == 3
        assert form.discriminant == -20
        assert form(1, -1) == 3
        assert closed_form_height(prime_over_2) == 3

    def test_norm_form_of_real_ideal(self):
        form, H = norm_form(quad_canonical(2, 2, 0, 1))
        assert form == NormForm(2, 0, -1)
        assert H == 2

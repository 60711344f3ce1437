from fractions import Fraction

import pytest

from LatticeAvoid.config import Var
from LatticeAvoid.core import certified_reals as cr
from LatticeAvoid.core.certified_reals import Ordering, QuadValue
from LatticeAvoid.core.nf_core import (
    IntPolynomial,
    NumberField,
    char_poly,
    embed,
    height,
    is_primitive,
    mahler_measure,
    norm,
    trace,
    vector_height,
)
from LatticeAvoid.ideals import height_scaling_holds, quadratic_field
from LatticeAvoid.utils.exceptions import InvalidInput


@pytest.fixture
def cubic():
    return NumberField.generic([-1, -1, 0, 1])


class TestQuadraticFields:
    @pytest.mark.parametrize("D, disc, r1", [(2, 8, 2), (5, 5, 2), (-1, -4, 0), (-5, -20, 0), (-3, -3, 0)])
    def test_discriminant_and_signature(self, D, disc, r1):
        K = NumberField.quadratic(D)
        assert K.discriminant == disc
        assert K.basis_discriminant == disc
        assert K.r1 == r1
        assert K.r2 == (2 - r1) // 2
        assert K.is_maximal

    def test_delta_squared_in_the_table(self, sqrt5, sqrt_minus5):
        assert sqrt5.defining_poly.coeffs == (-1, -1, 1)
        assert sqrt5.mult_table[1][1] == (1, 1)
        assert sqrt_minus5.mult_table[1][1] == (-5, 0)

    def test_rejects_non_squarefree(self):
        with pytest.raises(InvalidInput):
            NumberField.quadratic(12)
        with pytest.raises(InvalidInput):
            NumberField.quadratic(1)

    def test_norm_trace_and_char_poly(self, sqrt_minus5):
        alpha = sqrt_minus5.element((1, 1))
        assert norm(alpha) == 6
        assert trace(alpha) == 2
        assert char_poly(alpha).coeffs == (6, -2, 1)

    def test_multiplication_matches_delta_squared(self, sqrt5):
        delta = sqrt5.element((0, 1))
        assert (delta * delta).coords == (1, 1)
        assert (delta * delta - delta - sqrt5.one()).is_zero

    def test_primitivity(self, sqrt2):
        assert is_primitive(sqrt2.element((0, 1)))
        assert is_primitive(sqrt2.element((3, -2)))
        assert not is_primitive(sqrt2.element((4, 0)))

    def test_real_embedding_is_exact(self, sqrt2):
        emb = embed(sqrt2.element((1, 1)))
        assert emb.real == (QuadValue(1, -1, 2), QuadValue(1, 1, 2))
        assert cr.consistent(emb.sup_norm(), QuadValue(1, 1, 2))

    def test_complex_embedding(self, sqrt_minus5):
        emb = embed(sqrt_minus5.element((1, 1)))
        assert emb.real == ()
        assert emb.squared_moduli() == [Fraction(6)]
        assert emb.sup_norm() == QuadValue(0, 1, 6)


class TestGenericFields:
    def test_cubic_structure(self, cubic):
        assert cubic.degree == 3
        assert cubic.r1 == 1 and cubic.r2 == 1
        assert cubic.discriminant == -23
        assert cubic.is_maximal
        theta = cubic.element((0, 1, 0))
        assert char_poly(theta).coeffs == (-1, -1, 0, 1)
        assert norm(theta) == 1
        assert trace(theta) == 0

    def test_cubic_embedding_satisfies_defining_poly(self, cubic):
        emb = embed(cubic.element((0, 1, 0)))
        (root,) = emb.real
        assert cr.compare(root, Fraction(13247, 10000)) == Ordering.GREATER
        assert cr.compare(root, Fraction(13248, 10000)) == Ordering.LESS
        assert len(emb.complex) == 1

    def test_rational_elements_embed_exactly(self, cubic):
        emb = embed(cubic.rational(3))
        assert emb.real == (Fraction(3),)
        assert emb.complex == ((Fraction(3), Fraction(0)),)

    def test_rejects_bad_polynomials(self):
        with pytest.raises(InvalidInput):
            NumberField.generic([1, 0, 2])
        with pytest.raises(InvalidInput):
            NumberField.generic([-1, 0, 1])

    def test_degree_cap(self):
        Var.MAX_DEGREE = 2
        with pytest.raises(InvalidInput):
            NumberField.generic([-2, 0, 0, 1])

    def test_element_needs_full_coordinates(self, cubic):
        with pytest.raises(InvalidInput):
            cubic.element((1, 2))


class TestMahlerAndHeights:
    def test_polynomial_basics(self):
        f = IntPolynomial((-1, -1, 0, 1, 0, 0))
        assert f.coeffs == (-1, -1, 0, 1)
        assert f.degree == 3
        assert f.discriminant() == -23
        assert not f.all_coefficients_nonzero()
        assert f(2) == 5

    def test_exact_quadratic_measures(self):
        assert mahler_measure(IntPolynomial((-1, -2, 1))) == QuadValue(1, 1, 2)
        assert mahler_measure(IntPolynomial((2, -2, 1))) == Fraction(2)
        assert mahler_measure(IntPolynomial((-4, 0, 1))) == Fraction(4)
        assert mahler_measure(IntPolynomial((0, 2))) == Fraction(2)

    def test_measure_of_plastic_polynomial(self):
        M = mahler_measure(IntPolynomial((-1, -1, 0, 1)))
        assert cr.compare(M, Fraction(13247, 10000)) == Ordering.GREATER
        assert cr.compare(M, Fraction(13248, 10000)) == Ordering.LESS

    def test_measure_of_zero_polynomial(self):
        with pytest.raises(InvalidInput):
            mahler_measure(IntPolynomial((0,)))

    def test_heights(self, sqrt2, gaussian):
        assert height(sqrt2.element((0, 1))) == QuadValue(0, 1, 2)
        assert height(gaussian.element((0, 1))) == Fraction(1)
        assert height(gaussian.element((1, 1))) == QuadValue(0, 1, 2)

    def test_vector_height(self):
        assert vector_height((0, 0)) == 1
        assert vector_height((3, -7, 2)) == 7

    @pytest.mark.parametrize("D", [-5, -1, 2, 5])
    def test_norm_bounded_by_measure(self, rng, D):
        K = quadratic_field(D)
        for _ in range(40):
            alpha = K.element((rng.randint(-9, 9), rng.randint(-9, 9)))
            if alpha.is_zero:
                continue
            M = mahler_measure(char_poly(alpha))
            assert cr.compare(Fraction(abs(norm(alpha))), M) != Ordering.GREATER

    def test_height_scaling(self, rng, sqrt5, sqrt_minus5):
        for K in (sqrt5, sqrt_minus5):
            for _ in range(20):
                alpha = K.element((rng.randint(-6, 6), rng.randint(1, 6)))
                assert height_scaling_holds(alpha, rng.randint(1, 5))

from fractions import Fraction

import pytest

from LatticeAvoid.bounds import BoundName
from LatticeAvoid.checker import verify_document
from LatticeAvoid.config import Var
from LatticeAvoid.core import certified_reals as cr
from LatticeAvoid.core.certified_reals import QuadValue
from LatticeAvoid.core.nf_core import NumberField, embed
from LatticeAvoid.ideals import IntegralIdeal, NormForm, canonical_ideals, quad_canonical
from LatticeAvoid.io.certificates import height_document
from LatticeAvoid.theorems import (
    definite_form_minimum,
    mahler_within,
    nonsparse_generator,
    primitive_in_ideal_avoiding,
    principal_generator_quad,
    quad_hmin,
    quadratic_mahler,
    totally_positive_primitive,
)
from LatticeAvoid.utils.exceptions import (
    EnumerationBudgetExceeded,
    Inconclusive,
    InvalidInput,
    NotPrincipal,
    NotTotallyReal,
)


def predicate_failures(cert):
    return [c.name for c in cert.checks if c.kind != "bound" and not c.passed]


class TestHelpers:
    def test_quadratic_mahler(self, sqrt2, sqrt_minus5):
        assert cr.consistent(quadratic_mahler(sqrt2.element((1, 1))), QuadValue(1, 1, 2))
        assert quadratic_mahler(sqrt_minus5.element((1, 1))) == 6

    def test_mahler_within(self):
        assert mahler_within(Fraction(6), QuadValue(1, 1, 5), 2)
        assert not mahler_within(Fraction(7), Fraction(2), 2)
        assert mahler_within(Fraction(3), Fraction(3), 2, "mahler")

    def test_definite_form_minimum(self):
        assert definite_form_minimum(NormForm(2, 2, 3)) == 2
        assert definite_form_minimum(NormForm(1, 0, 1)) == 1
        assert definite_form_minimum(NormForm(2, 2, 1)) == 1


class TestHmin:
    def test_prime_over_2_in_imaginary_field(self):
        report = quad_hmin(quad_canonical(-5, 2, 1, 1))
        assert report.norm == 2
        assert cr.consistent(report.h_min, QuadValue(0, 1, 6))
        assert report.certificate.element.coords == (1, 1)
        assert report.certificate.mahler == 6
        assert cr.consistent(report.lower, QuadValue(0, 1, 2))
        assert cr.consistent(report.lower_imaginary, QuadValue(0, 1, 5))
        assert cr.consistent(report.upper, QuadValue(1, 1, 5))
        assert report.flags == []
        assert report.min_norm >= 2
        assert report.certificate.passed

    def test_upper_bound_attained(self):
        report = quad_hmin(quad_canonical(2, 1, 0, 1))
        assert report.certificate.element.coords == (0, 1)
        assert cr.consistent(report.h_min, QuadValue(0, 1, 2))
        assert cr.consistent(report.upper, QuadValue(0, 1, 2))
        assert report.lower_imaginary is None
        assert report.certificate.passed

    def test_gaussian_unit_ideal_attains_both_lower_bounds(self):
        report = quad_hmin(quad_canonical(-1, 1, 0, 1))
        assert report.h_min == 1
        assert report.flags == ["lower-bound-attained", "imaginary-lower-bound-attained"]
        assert report.certificate.passed

    def test_golden_ratio(self):
        report = quad_hmin(quad_canonical(5, 1, 0, 1))
        assert report.certificate.element.coords == (0, 1)
        assert cr.consistent(report.certificate.mahler, QuadValue(Fraction(1, 2), Fraction(1, 2), 5))
        assert "closed-form-norm-mismatch" in report.flags
        assert report.certificate.bound_violations == []

    def test_bounds_mode_skips_the_oracle(self):
        report = quad_hmin(quad_canonical(-5, 2, 1, 1), mode="bounds")
        assert report.certificate is None
        assert report.h_min is None
        assert report.upper_witness.coords == (1, 1)

    def test_unknown_mode(self):
        with pytest.raises(InvalidInput):
            quad_hmin(quad_canonical(-5, 2, 1, 1), mode="fast")

    def test_norm_cap(self):
        Var.HMIN_NORM_CAP = 1
        with pytest.raises(EnumerationBudgetExceeded):
            quad_hmin(quad_canonical(-5, 2, 1, 1))

    def test_certificate_verifies(self):
        report = quad_hmin(quad_canonical(-1, 2, 1, 1))
        doc = height_document(report.certificate, "hmin", report.ideal.field, ideal=report.ideal)
        assert verify_document(doc).passed

    @pytest.mark.parametrize("D", [-7, -3, 3, 5, 13])
    def test_bracketed_by_bounds(self, D):
        for q in canonical_ideals(D, 4):
            report = quad_hmin(q)
            assert not predicate_failures(report.certificate), (q, predicate_failures(report.certificate))
            assert report.certificate.bound_violations == []


class TestAvoidingIdeals:
    def test_gaussian_unit_avoiding_prime_over_2(self, gaussian):
        unit = IntegralIdeal.unit(gaussian)
        prime = IntegralIdeal.principal(gaussian, (1, 1))
        cert = primitive_in_ideal_avoiding(unit, [prime])
        assert cert.bound_name is BoundName.AVOIDING_PRIMITIVE
        assert not prime.contains(cert.element.coords)
        assert cert.passed
        doc = height_document(cert, "primitive", gaussian, ideal=unit, avoided=[prime])
        assert verify_document(doc).passed

    def test_two_avoided_ideals(self, sqrt5):
        unit = IntegralIdeal.unit(sqrt5)
        avoided = [IntegralIdeal.principal(sqrt5, (2, 0)), IntegralIdeal.principal(sqrt5, (3, 0))]
        cert = primitive_in_ideal_avoiding(unit, avoided)
        assert predicate_failures(cert) == []
        assert all(not J.contains(cert.element.coords) for J in avoided)

    def test_cubic_field(self):
        K = NumberField.generic([-1, -1, 0, 1])
        cert = primitive_in_ideal_avoiding(IntegralIdeal.unit(K), [IntegralIdeal.principal(K, (2, 0, 0))])
        assert predicate_failures(cert) == []
        assert cert.element.field is K

    def test_rejects_improper_or_repeated_ideals(self, gaussian):
        unit = IntegralIdeal.unit(gaussian)
        prime = IntegralIdeal.principal(gaussian, (1, 1))
        with pytest.raises(InvalidInput):
            primitive_in_ideal_avoiding(unit, [])
        with pytest.raises(InvalidInput):
            primitive_in_ideal_avoiding(unit, [prime, prime])
        with pytest.raises(InvalidInput):
            primitive_in_ideal_avoiding(unit, [unit])


class TestTotallyPositive:
    @pytest.mark.parametrize("field_name, generator", [("sqrt2", (0, 1)), ("sqrt5", (2, 0))])
    def test_element_is_totally_positive(self, request, field_name, generator):
        K = request.getfixturevalue(field_name)
        unit = IntegralIdeal.unit(K)
        J = IntegralIdeal.principal(K, generator)
        cert = totally_positive_primitive(unit, [J])
        assert cert.bound_name is BoundName.TOTALLY_POSITIVE
        assert predicate_failures(cert) == []
        assert all(cr.sign(v) > 0 for v in embed(cert.element).real)
        assert "conservative-covering-radius" in cert.flags
        report = verify_document(height_document(cert, "tpositive", K, ideal=unit, avoided=[J]))
        assert [n for n in report.failures if n not in report.bound_violations] == []

    def test_imaginary_field_is_rejected(self, gaussian):
        with pytest.raises(NotTotallyReal):
            totally_positive_primitive(IntegralIdeal.unit(gaussian), [IntegralIdeal.principal(gaussian, (1, 1))])


class TestNonsparse:
    def test_real_quadratic(self, sqrt2):
        f, cert = nonsparse_generator(sqrt2)
        assert f.coeffs == (-1, -2, 1)
        assert cert.inputs["xi"] == [1, 1]
        assert cert.bound_target == "mahler"
        assert cr.consistent(cert.mahler, QuadValue(1, 1, 2))
        assert cert.passed

    def test_gaussian(self, gaussian):
        f, cert = nonsparse_generator(gaussian)
        assert f.coeffs == (2, -2, 1)
        assert cert.mahler == 2
        assert cert.passed
        assert verify_document(height_document(cert, "mahler", gaussian)).passed

    def test_cubic(self):
        K = NumberField.generic([-1, -1, 0, 1])
        f, cert = nonsparse_generator(K)
        assert f.degree == 3
        assert f.all_coefficients_nonzero()
        assert predicate_failures(cert) == []

    def test_grid_degree_cap(self):
        Var.GRID_DEGREE_CAP = 2
        with pytest.raises(InvalidInput):
            nonsparse_generator(NumberField.generic([-1, -1, 0, 1]))


class TestPrincipalGenerator:
    def test_non_principal_imaginary_ideal(self):
        with pytest.raises(NotPrincipal) as excinfo:
            principal_generator_quad(quad_canonical(-5, 2, 1, 1))
        assert excinfo.value.form_minimum == 2

    def test_unit_ideal_has_rational_generator(self):
        cert = principal_generator_quad(quad_canonical(-1, 1, 0, 1))
        assert cert.element.coords == (1, 0)
        assert "rational-generator" in cert.flags

    def test_gaussian_prime(self):
        q = quad_canonical(-1, 2, 1, 1)
        cert = principal_generator_quad(q)
        assert (cert.inputs["x"], cert.inputs["y"]) == (0, 1)
        assert cert.element.coords == (1, 1)
        assert cert.inputs["form"] == [2, 2, 1]
        assert "rational-generator" not in cert.flags
        assert cert.passed
        assert verify_document(height_document(cert, "generator", q.field, ideal=q)).passed

    def test_negative_norm_generator(self):
        cert = principal_generator_quad(quad_canonical(2, 2, 0, 1))
        assert cert.element.coords == (0, 1)
        assert "negative-norm-generator" in cert.flags
        assert predicate_failures(cert) == []

    def test_capped_real_search_is_inconclusive(self):
        # (2, sqrt 10) has norm form 2x^2 - 5y^2, which misses +-1 mod 5
        with pytest.raises(Inconclusive) as excinfo:
            principal_generator_quad(quad_canonical(10, 2, 0, 1), cap=3)
        assert excinfo.value.searched == 49

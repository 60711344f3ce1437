from fractions import Fraction

import pytest

from LatticeAvoid.config import Var
from LatticeAvoid.core import certified_reals as cr
from LatticeAvoid.core.certified_reals import IntervalReal, Ordering, QuadValue
from LatticeAvoid.utils.exceptions import PrecisionExhausted

SQRT2 = QuadValue(0, 1, 2)


class TestQuadValue:
    def test_exact_sign_of_mixed_terms(self):
        assert QuadValue(1, -1, 2).sign() == -1
        assert QuadValue(3, -2, 2).sign() == 1
        assert QuadValue(-3, 2, 2).sign() == -1
        assert QuadValue(0, 0, 2).sign() == 0

    def test_arithmetic_stays_in_the_field(self):
        x = QuadValue(1, 1, 2)
        assert x * x.conjugate() == QuadValue(-1, 0, 2)
        assert x.norm() == -1
        assert (x / x) == QuadValue(1, 0, 2)

    def test_rejects_non_squarefree_radicand(self):
        with pytest.raises(ValueError):
            QuadValue(0, 1, 4)
        with pytest.raises(ValueError):
            QuadValue(0, 1, 1)

    def test_non_real_value_has_no_sign(self):
        with pytest.raises(ValueError):
            QuadValue(0, 1, -5).sign()


class TestCompare:
    def test_rational_against_surd(self):
        assert cr.compare(SQRT2, Fraction(7, 5)) == Ordering.GREATER
        assert cr.compare(SQRT2, Fraction(3, 2)) == Ordering.LESS

    def test_equal_surds_are_equal(self):
        assert cr.compare(cr.sqrt_rational(8), QuadValue(0, 2, 2)) == Ordering.EQUAL

    def test_different_radicands_are_separated_by_refinement(self):
        assert cr.compare(SQRT2, QuadValue(0, 1, 3)) == Ordering.LESS
        assert cr.compare(QuadValue(1, 1, 5), QuadValue(0, 2, 2)) == Ordering.GREATER

    def test_interval_tie_raises_at_the_cap(self):
        Var.PRECISION_CAP = 64
        square = cr.mul(cr.to_interval(SQRT2), cr.to_interval(QuadValue(0, 1, 3)))
        six = cr.mul(cr.to_interval(QuadValue(0, 1, 6)), Fraction(1))
        with pytest.raises(PrecisionExhausted):
            cr.compare(square, cr.to_interval(six))

    def test_tie_bits_reports_equal(self):
        square = cr.mul(cr.to_interval(SQRT2), cr.to_interval(QuadValue(0, 1, 3)))
        assert cr.compare(square, QuadValue(0, 1, 6), tie_bits=32) == Ordering.EQUAL

    def test_max_of_tied_intervals_is_their_hull(self):
        square = cr.mul(cr.to_interval(SQRT2), cr.to_interval(QuadValue(0, 1, 3)))
        six = cr.to_interval(QuadValue(0, 1, 6))
        for extremum in (cr.maximum(square, six), cr.minimum(six, square)):
            assert isinstance(extremum, IntervalReal)
            lo, hi = cr.enclosure(extremum, 80)
            assert lo * lo <= 6 <= hi * hi
            assert hi - lo <= Fraction(1, 2 ** 80)

    def test_fixed_enclosure_cannot_be_refined(self):
        with pytest.raises(PrecisionExhausted):
            cr.compare(IntervalReal.fixed(0, 1), Fraction(1, 2))

    def test_consistent_and_certified_nonzero(self):
        assert cr.consistent(cr.to_interval(SQRT2), SQRT2)
        assert not cr.consistent(SQRT2, Fraction(7, 5))
        assert not cr.certified_nonzero(cr.sub(cr.mul(SQRT2, SQRT2), Fraction(2)))
        assert cr.certified_nonzero(cr.sub(SQRT2, Fraction(1)))


class TestRootsAndConstants:
    def test_sqrt_rational(self):
        assert cr.sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
        assert cr.sqrt_rational(8) == QuadValue(0, 2, 2)
        assert cr.sqrt_rational(Fraction(1, 2)) == QuadValue(0, Fraction(1, 2), 2)
        with pytest.raises(ValueError):
            cr.sqrt_rational(-1)

    def test_nth_root_exact_and_interval(self):
        assert cr.nth_root(Fraction(27, 8), 3) == Fraction(3, 2)
        cube_root = cr.nth_root(Fraction(2), 3)
        assert cr.compare(cube_root, Fraction(125, 100)) == Ordering.GREATER
        assert cr.compare(cube_root, Fraction(126, 100)) == Ordering.LESS

    def test_pi_enclosure(self):
        assert cr.compare(cr.pi_value(), Fraction(355, 113)) == Ordering.LESS
        assert cr.compare(cr.pi_value(), Fraction(333, 106)) == Ordering.GREATER

    def test_real_root_by_bisection(self):
        root = cr.real_root([-2, 0, 1], 1, 2)
        assert cr.compare(root, Fraction(141421, 100000)) == Ordering.GREATER
        assert cr.compare(root, Fraction(141422, 100000)) == Ordering.LESS
        with pytest.raises(ValueError):
            cr.real_root([-2, 0, 1], 2, 3)

    def test_isolated_roots_of_x2_plus_1(self):
        balls = cr.isolate_roots([1, 0, 1], 20)
        assert len(balls) == 1
        assert balls[0].im > 0
        lo, hi = balls[0].imag_enclosure()
        assert lo <= 1 <= hi


class TestRefinementAndRendering:
    def test_refine_to_width(self):
        v = cr.refine_to(SQRT2, Fraction(1, 1 << 40))
        assert v.width <= Fraction(1, 1 << 40)
        assert v.lo * v.lo <= 2 <= v.hi * v.hi

    def test_refine_below_cap_raises(self):
        with pytest.raises(PrecisionExhausted):
            cr.refine_to(SQRT2, Fraction(1, 1 << (Var.PRECISION_CAP + 1)))

    def test_decimal_rendering(self):
        assert cr.to_decimal(Fraction(1, 4)) == "0.25"
        assert cr.to_decimal(SQRT2, 30).startswith("1.41421356237309504880168872")
        assert cr.to_decimal(QuadValue(1, 1, 5), 12).startswith("3.2360679")

    def test_exact_forms_round_trip(self):
        for value in (Fraction(-7, 3), QuadValue(1, Fraction(1, 2), 5)):
            assert cr.from_exact_form(cr.exact_form(value)) == value
        interval = cr.from_exact_form(cr.exact_form(cr.nth_root(Fraction(2), 3)))
        assert isinstance(interval, IntervalReal)
        assert interval.lo ** 3 <= 2 <= interval.hi ** 3

    def test_unknown_exact_form(self):
        with pytest.raises(ValueError):
            cr.from_exact_form({"kind": "float", "value": "1.5"})

    def test_abs_max_min(self):
        assert cr.abs_(QuadValue(1, -1, 2)) == QuadValue(-1, 1, 2)
        assert cr.maximum(Fraction(1), SQRT2) == SQRT2
        assert cr.minimum(Fraction(1), SQRT2) == Fraction(1)

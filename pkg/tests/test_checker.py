import copy
from fractions import Fraction

import pytest

from LatticeAvoid.avoidance import AvoidanceProblem, SparsePolynomial, avoid_point, positive_avoid_point
from LatticeAvoid.checker import verify_document
from LatticeAvoid.core.certified_reals import QuadValue
from LatticeAvoid.core.nf_core import IntPolynomial
from LatticeAvoid.ideals import quad_canonical
from LatticeAvoid.io.certificates import (
    avoidance_document,
    height_document,
    hmin_document,
    measure_document,
    render_real,
)
from LatticeAvoid.theorems import principal_generator_quad, quad_hmin
from LatticeAvoid.utils.exceptions import InvalidInput


@pytest.fixture
def avoidance_doc(z2, two_z2):
    problem = AvoidanceProblem(z2, [two_z2], SparsePolynomial.linear([1, -1]))
    return avoidance_document(avoid_point(problem), problem)


def test_avoidance_certificate_verifies(avoidance_doc):
    report = verify_document(avoidance_doc)
    assert report.kind == "avoidance"
    assert report.passed
    assert "norm-within-bound" in [c.name for c in report.checks]


def test_positive_certificate_verifies(z2, two_z2):
    problem = AvoidanceProblem(z2, [two_z2], SparsePolynomial.linear([1, -1]))
    report = verify_document(avoidance_document(positive_avoid_point(problem), problem))
    assert report.passed
    assert "z-nonnegative" in [c.name for c in report.checks]


def test_moved_point_is_caught(avoidance_doc):
    doc = copy.deepcopy(avoidance_doc)
    doc["z"] = [2, 0]
    report = verify_document(doc)
    assert not report.passed
    assert "z-outside-sublattice-0" in report.failures
    assert "ambient-matches" in report.failures


def test_edited_bound_is_caught(avoidance_doc):
    doc = copy.deepcopy(avoidance_doc)
    doc["bound"]["value"] = render_real(Fraction(36))
    report = verify_document(doc)
    assert report.failures == ["bound-matches"]
    assert report.bound_violations == []


def test_missing_problem_block(avoidance_doc):
    doc = dict(avoidance_doc)
    del doc["problem"]
    with pytest.raises(InvalidInput):
        verify_document(doc)


def test_unknown_kind():
    with pytest.raises(InvalidInput):
        verify_document({"kind": "mystery"})


def test_hmin_bounds_document():
    report = verify_document(hmin_document(quad_hmin(quad_canonical(-5, 2, 1, 1), mode="bounds")))
    assert report.kind == "hmin-bounds"
    assert [c.name for c in report.checks] == ["lower-matches", "upper-matches", "norm-matches"]
    assert report.passed


def test_hmin_document_checks_the_lower_bounds():
    report = verify_document(hmin_document(quad_hmin(quad_canonical(-5, 2, 1, 1))))
    names = [c.name for c in report.checks]
    assert "height-above-lower" in names
    assert "height-above-imaginary-lower" in names
    assert report.passed


def test_generator_document_with_wrong_element_fails():
    q = quad_canonical(-1, 2, 1, 1)
    doc = height_document(principal_generator_quad(q), "generator", q.field, ideal=q)
    doc["element"] = [2, 0]
    report = verify_document(doc)
    assert "norm-matches-ideal" in report.failures
    assert "mahler-matches" in report.failures


def test_measure_document():
    f = IntPolynomial((-1, -2, 1))
    doc = measure_document(f, QuadValue(1, 1, 2))
    assert verify_document(doc).passed
    doc["mahler"] = render_real(Fraction(2))
    assert verify_document(doc).failures == ["mahler-matches"]

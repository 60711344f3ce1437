"""
Independent certificate verification.

The checker reads a certificate document back from its exact forms and
re-derives every claim with as little shared machinery as possible:
membership is decided by solving the basis system over Q with sympy,
polynomials are evaluated term by term, heights come from Mahler measures
of characteristic polynomials, and bounds are recomputed from the recorded
ingredients before being compared with compare().
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from sympy import Matrix, Rational

from .bounds import (
    BoundName,
    avoidance_bound,
    avoiding_primitive_bound,
    cube_volume,
    hmin_lower,
    hmin_lower_imaginary,
    hmin_upper,
    nonsparse_mahler_bound,
    positive_avoidance_bound,
    principal_generator_bound,
    totally_positive_bound,
)
from .core import certified_reals as cr
from .core.certified_reals import CertifiedReal, Ordering
from .core.nf_core import AlgebraicInteger, IntPolynomial, NumberField, char_poly, embed, mahler_measure, norm
from .ideals import IntegralIdeal, QuadIdeal, _as_integral, ideal_norm, norm_form
from .io.descriptors import parse_field, parse_ideal, parse_lattice, parse_polynomial, parse_real
from .utils.exceptions import InvalidInput, PrecisionExhausted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifiedCheck:
    name: str
    passed: bool
    kind: str = "predicate"


@dataclass
class VerifyReport:
    kind: str
    checks: List[VerifiedCheck] = field(default_factory=list)

    def add(self, name: str, passed: bool, kind: str = "predicate"):
        self.checks.append(VerifiedCheck(name, bool(passed), kind))

    def extend(self, other: "VerifyReport", prefix: str):
        self.checks.extend(VerifiedCheck(f"{prefix}:{c.name}", c.passed, c.kind) for c in other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def bound_violations(self) -> List[str]:
        return [c.name for c in self.checks if c.kind == "bound" and not c.passed]

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]


def _real(entry) -> CertifiedReal:
    return parse_real(entry["exact"] if isinstance(entry, dict) and "exact" in entry else entry)


def _le(a: CertifiedReal, b: CertifiedReal) -> bool:
    try:
        return cr.compare(a, b) != Ordering.GREATER
    except PrecisionExhausted:
        return False


def _member(columns: Sequence[Sequence[int]], point: Sequence[int]) -> bool:
    """point lies in the Z-span of the columns iff the rational solution is integral."""
    M = Matrix([[columns[j][i] for j in range(len(columns))] for i in range(len(point))])
    solution = M.LUsolve(Matrix([int(p) for p in point]))
    return all(Rational(v).q == 1 for v in solution)


def _evaluate(terms, point: Sequence[CertifiedReal]) -> CertifiedReal:
    total: CertifiedReal = Fraction(0)
    for exps, coeff in terms:
        term: CertifiedReal = Fraction(coeff)
        for value, e in zip(point, exps):
            for _ in range(e):
                term = cr.mul(term, value)
        total = cr.add(total, term)
    return total


def _sup_norm_sq(ambient: Sequence[CertifiedReal], complex_pairs: int) -> CertifiedReal:
    real = len(ambient) - 2 * complex_pairs
    squares = [cr.mul(v, v) for v in ambient[:real]]
    for j in range(complex_pairs):
        re, im = ambient[real + 2 * j], ambient[real + 2 * j + 1]
        squares.append(cr.add(cr.mul(re, re), cr.mul(im, im)))
    best = squares[0]
    for sq in squares[1:]:
        best = cr.maximum(best, sq)
    return best


# ---------------------------------------------------------------------------
# Avoidance certificates

def verify_avoidance(doc: dict, element_check: Optional[Callable[[Sequence[int]], bool]] = None) -> VerifyReport:
    """
    Re-verify an avoidance certificate.

    Args:
        doc: The certificate document including its "problem" block
        element_check: Predicate on z for problems whose polynomial is
            evaluated on field elements rather than on coordinates
    """
    report = VerifyReport(doc.get("kind", "avoidance"))
    problem = doc.get("problem")
    if problem is None:
        raise InvalidInput("avoidance certificate has no problem block to verify against")
    omega = parse_lattice(problem["omega"])
    pairs = omega.norm_model.complex_pairs
    subs = [[list(col) for col in sub] for sub in problem["sublattices"]]
    core = [list(col) for col in problem["core"]]
    z = [int(v) for v in doc["z"]]
    inputs = doc["inputs"]
    d = omega.d

    ambient = [cr.sum_(cr.mul(Fraction(c), col[i]) for c, col in zip(z, omega.columns)) for i in range(d)]
    stored = [_real(v) for v in doc["ambient"]]
    report.add("ambient-matches", all(cr.consistent(a, b) for a, b in zip(ambient, stored)))
    for i, sub in enumerate(subs):
        report.add(f"z-outside-sublattice-{i}", not _member(sub, z))
        report.add(f"core-inside-sublattice-{i}", all(_member(sub, col) for col in core))

    D = abs(int(Matrix(core).det()))
    indices = [abs(int(Matrix(sub).det())) for sub in subs]
    report.add("index-matches", D == int(inputs["D"]) and indices == [int(v) for v in inputs["indices"]])

    predicate = problem["predicate"]
    if predicate.get("kind") == "polynomial":
        poly = parse_polynomial(predicate["terms"], d)
        try:
            nonzero = cr.sign(_evaluate(poly.terms, ambient)) != 0
        except PrecisionExhausted:
            nonzero = False
        report.add("predicate-nonzero", nonzero)
        m = poly.degree
    else:
        if element_check is None:
            raise InvalidInput(f"predicate {predicate.get('kind')!r} needs the field to verify")
        report.add("predicate-nonzero", element_check(z))
        m = int(predicate["degree"])
    report.add("degree-matches", m == int(inputs["m"]))

    xi = [int(v) for v in doc["xi"]]
    report.add("xi1-congruent-1-mod-D", (xi[0] - 1) % D == 0)
    positive = doc["kind"] == BoundName.POSITIVE_AVOIDANCE.value
    spanning = [int(v) for v in (inputs["y"] if positive else doc["witness"])]
    others = inputs["u_vectors"] if positive else inputs["minima_vectors"]
    basis = [spanning] + [[int(v) for v in vec] for vec in others]
    report.add("z-from-grid", [sum(c * v[i] for c, v in zip(xi, basis)) for i in range(d)] == z)
    report.add("witness-outside-sublattices", not any(_member(sub, doc["witness"]) for sub in subs))

    det = cr.mul(cr.abs_(omega.coordinate_det), Fraction(2 ** pairs))
    minima = [_real(v) for v in inputs["lambda"]]
    if positive:
        mu = _real(inputs["mu_upper"])
        bound = positive_avoidance_bound(d, m, indices, D, det, minima, mu)
        report.add("z-nonnegative", all(_le(Fraction(0), v) for v in ambient))
    else:
        volume = cube_volume(d - 2 * pairs, pairs)
        bound = avoidance_bound(d, m, indices, D, det, minima[0], volume)
    report.add("bound-matches", cr.consistent(bound, _real(doc["bound"]["value"])))
    report.add("norm-within-bound", _le(_sup_norm_sq(ambient, pairs), cr.mul(bound, bound)), "bound")
    return report


# ---------------------------------------------------------------------------
# Height certificates

def _recompute_bound(doc: dict, K: NumberField, ideal, avoided) -> CertifiedReal:
    name = doc["bound"]["name"]
    d, disc = K.degree, K.basis_discriminant
    if name == BoundName.HMIN_UPPER.value:
        return hmin_upper(ideal.D, ideal.b, ideal.g)
    if name == BoundName.AVOIDING_PRIMITIVE.value:
        J = _product_norm(avoided)
        return avoiding_primitive_bound(d, K.r2, ideal_norm(ideal), [ideal_norm(A) for A in avoided], J, disc)
    if name == BoundName.TOTALLY_POSITIVE.value:
        J = _product_norm(avoided)
        return totally_positive_bound(d, ideal_norm(ideal), [ideal_norm(A) for A in avoided], J, disc)
    if name == BoundName.NONSPARSE_MAHLER.value:
        return nonsparse_mahler_bound(d, K.r2, disc)
    if name == BoundName.PRINCIPAL_GENERATOR.value:
        _, H = norm_form(ideal)
        return principal_generator_bound(ideal.D, ideal.a, ideal.b, ideal.g, H)
    raise InvalidInput(f"unknown bound name {name!r}")


def _product_norm(avoided) -> int:
    product = _as_integral(avoided[0])
    for other in avoided[1:]:
        product = product * _as_integral(other)
    return product.norm


def verify_height(doc: dict) -> VerifyReport:
    report = VerifyReport(doc.get("driver", "height"))
    K = parse_field(doc["field"])
    alpha = K.element([int(v) for v in doc["element"]])
    ideal = parse_ideal(doc["ideal"], K) if "ideal" in doc else None
    avoided = [parse_ideal(j, K) for j in doc.get("avoid", [])]
    d = K.degree
    f = char_poly(alpha)
    primitive = f.discriminant() != 0
    report.add("element-primitive", primitive)

    M = mahler_measure(f)
    report.add("mahler-matches", cr.consistent(M, _real(doc["mahler"])))
    bound = _recompute_bound(doc, K, ideal, avoided)
    report.add("bound-matches", cr.consistent(bound, _real(doc["bound"]["value"])))
    limit = bound if doc["bound"].get("target") == "mahler" else cr.power(bound, d)
    report.add("height-within-bound", _le(M, limit), "bound")

    if ideal is not None:
        I = _as_integral(ideal)
        report.add("element-in-ideal", _member(I.module.matrix, alpha.coords))
    for i, J in enumerate(avoided):
        report.add(f"element-outside-ideal-{i}", not _member(_as_integral(J).module.matrix, alpha.coords))

    driver = doc.get("driver")
    if driver == "hmin":
        _verify_hmin(report, ideal, M)
    elif driver == "tpositive":
        report.add("element-totally-positive", all(_le(Fraction(0), v) for v in embed(alpha).real))
    elif driver == "generator":
        _verify_generator(report, ideal, alpha)
    elif driver == "mahler":
        stored = [int(c) for c in doc["inputs"]["polynomial"]]
        report.add("polynomial-matches", stored == list(f.coeffs))
        report.add("polynomial-monic", f.coeffs[-1] == 1 and f.degree == d)
        report.add("coefficients-nonzero", all(c != 0 for c in f.coeffs))

    if "avoidance" in doc:
        I = _as_integral(ideal)

        def element_check(z: Sequence[int]) -> bool:
            coords = [sum(c * col[i] for c, col in zip(z, I.module.matrix)) for i in range(d)]
            return char_poly(K.element(coords)).discriminant() != 0

        report.extend(verify_avoidance(doc["avoidance"], element_check), "avoidance")
        z = doc["avoidance"]["z"]
        mapped = [sum(int(c) * col[i] for c, col in zip(z, I.module.matrix)) for i in range(d)]
        report.add("element-from-avoidance", mapped == list(alpha.coords))
    return report


def _verify_hmin(report: VerifyReport, q: QuadIdeal, M: CertifiedReal):
    lower = hmin_lower(q.a, q.g)
    report.add("height-above-lower", _le(cr.mul(lower, lower), M), "bound")
    if q.D < 0:
        extra = hmin_lower_imaginary(q.D, q.g)
        report.add("height-above-imaginary-lower", _le(cr.mul(extra, extra), M), "bound")


def _verify_generator(report: VerifyReport, q: QuadIdeal, mu: AlgebraicInteger):
    report.add("norm-matches-ideal", abs(norm(mu)) == ideal_norm(q))
    generated = IntegralIdeal.principal(q.field, mu)
    report.add("first-generator-divisible", _member(generated.module.matrix, q.first.coords))
    report.add("second-generator-divisible", _member(generated.module.matrix, q.second.coords))


def verify_hmin_bounds(doc: dict) -> VerifyReport:
    report = VerifyReport("hmin-bounds")
    q = parse_ideal(doc["ideal"])
    bounds = doc["bounds"]
    report.add("lower-matches", cr.consistent(hmin_lower(q.a, q.g), _real(bounds["lower"])))
    report.add("upper-matches", cr.consistent(hmin_upper(q.D, q.b, q.g), _real(bounds["upper"])))
    report.add("norm-matches", ideal_norm(q) == int(bounds["norm"]))
    return report


def verify_measure(doc: dict) -> VerifyReport:
    report = VerifyReport("mahler-measure")
    f = IntPolynomial(tuple(int(c) for c in doc["polynomial"]))
    M = _real(doc["mahler"])
    report.add("mahler-matches", cr.consistent(mahler_measure(f), M))
    # M(f) >= |a_0| and M(f) >= |a_n| for every integer polynomial
    report.add("mahler-above-end-coefficients",
               _le(Fraction(abs(f.coeffs[0])), M) and _le(Fraction(abs(f.leading)), M))
    return report


def verify_document(doc: dict) -> VerifyReport:
    """Dispatch on the certificate kind."""
    kind = doc.get("kind")
    if kind in (BoundName.AVOIDANCE.value, BoundName.POSITIVE_AVOIDANCE.value):
        report = verify_avoidance(doc)
    elif kind == "height":
        report = verify_height(doc)
    elif kind == "mahler-measure":
        report = verify_measure(doc)
    elif kind == "hmin-bounds":
        report = verify_hmin_bounds(doc)
    else:
        raise InvalidInput(f"unknown certificate kind {kind!r}")
    if report.passed:
        logger.info(f"Verified {report.kind} certificate: {len(report.checks)} checks passed")
    else:
        logger.warning(f"Certificate {report.kind} failed checks {report.failures}")
    return report

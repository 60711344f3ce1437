"""
Height-bounded witnesses in number fields.

Each driver returns a ``HeightCertificate`` that records the element, its
height, the bound it is measured against and every ingredient of that
bound, so the independent checker can recompute all of it:

- ``quad_hmin``: smallest height of a primitive element of a quadratic ideal
- ``primitive_in_ideal_avoiding``: primitive element of I outside J_1, ..., J_s
- ``totally_positive_primitive``: the same, totally positive
- ``nonsparse_generator``: characteristic polynomial with no zero coefficient
- ``principal_generator_quad``: generator of a principal quadratic ideal
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from .avoidance import (
    AvoidanceCertificate,
    AvoidanceProblem,
    Check,
    NonsparsePredicate,
    PrimitivityPredicate,
    _zigzag_rank,
    avoid_point,
    cn_select,
    positive_avoid_point,
)
from .bounds import (
    BoundName,
    avoiding_primitive_bound,
    covering_radius_estimate,
    field_baseline,
    hmin_lower,
    hmin_lower_imaginary,
    hmin_upper,
    ideal_baseline,
    kornhauser_box,
    mahler_baseline,
    minima_sum_estimate,
    nonsparse_mahler_bound,
    principal_generator_bound,
    quad_disc,
    totally_positive_bound,
)
from .config import Var
from .core import certified_reals as cr
from .core.certified_reals import CertifiedReal, Ordering
from .core.lattice_core import successive_minima
from .core.nf_core import (
    AlgebraicInteger,
    IntPolynomial,
    NumberField,
    char_poly,
    embed,
    is_primitive,
    mahler_measure,
    norm,
)
from .ideals import (
    AnyIdeal,
    IntegralIdeal,
    NormForm,
    QuadIdeal,
    _as_integral,
    closed_form_height,
    ideal_lattice,
    ideal_norm,
    ideal_product,
    ideal_sublattice,
    norm_form,
)
from .utils.exceptions import (
    EnumerationBudgetExceeded,
    GridExhausted,
    Inconclusive,
    InvalidInput,
    NotPrincipal,
    NotTotallyReal,
    NullstellensatzFailure,
    PrecisionExhausted,
)
from .utils.smart_logger import SmartRateLimitedLogger

logger = logging.getLogger(__name__)
progress = SmartRateLimitedLogger(logger, rate_limit_seconds=5)


@dataclass
class HeightCertificate:
    """
    An algebraic integer with its height and the bound it satisfies.

    ``bound_target`` says whether ``bound`` caps the height or the Mahler
    measure of the characteristic polynomial.
    """
    element: AlgebraicInteger
    height: CertifiedReal
    mahler: CertifiedReal
    bound_name: BoundName
    bound: CertifiedReal
    bound_target: str = "height"
    inputs: Dict[str, object] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    baselines: Dict[str, CertifiedReal] = field(default_factory=dict)
    avoidance: Optional[AvoidanceCertificate] = None
    problem: Optional[AvoidanceProblem] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and (self.avoidance is None or self.avoidance.passed)

    @property
    def bound_violations(self) -> List[str]:
        names = [c.name for c in self.checks if c.kind == "bound" and not c.passed]
        if self.avoidance is not None:
            names.extend(f"avoidance:{n}" for n in self.avoidance.bound_violations)
        return names


def _le(a: CertifiedReal, b: CertifiedReal) -> bool:
    try:
        return cr.compare(a, b) != Ordering.GREATER
    except PrecisionExhausted:
        return False


def mahler_within(mahler: CertifiedReal, bound: CertifiedReal, degree: int, target: str = "height") -> bool:
    """M <= bound, or h <= bound through M <= bound^d."""
    return _le(mahler, bound if target == "mahler" else cr.power(bound, degree))


def quadratic_mahler(alpha: AlgebraicInteger) -> CertifiedReal:
    """Exact M(alpha) = prod max{1, |sigma_j(alpha)|} for a quadratic integer."""
    emb = embed(alpha)
    if emb.real:
        s1, s2 = (cr.abs_(v) for v in emb.real)
        return cr.mul(cr.maximum(Fraction(1), s1), cr.maximum(Fraction(1), s2))
    return cr.maximum(Fraction(1), emb.squared_moduli()[0])


def _field_mahler(alpha: AlgebraicInteger) -> CertifiedReal:
    if alpha.field.is_quadratic and not alpha.is_zero:
        return quadratic_mahler(alpha)
    return mahler_measure(char_poly(alpha))


def _height_from_mahler(mahler: CertifiedReal, d: int) -> CertifiedReal:
    return cr.nth_root(mahler, d)


# ---------------------------------------------------------------------------
# Smallest height in a quadratic ideal

@dataclass
class HminReport:
    ideal: QuadIdeal
    norm: int
    lower: CertifiedReal
    lower_imaginary: Optional[CertifiedReal]
    upper: CertifiedReal
    baseline: CertifiedReal
    upper_witness: AlgebraicInteger
    upper_witness_height: CertifiedReal
    certificate: Optional[HeightCertificate] = None
    examined: int = 0
    min_norm: Optional[int] = None
    flags: List[str] = field(default_factory=list)

    @property
    def h_min(self) -> Optional[CertifiedReal]:
        return self.certificate.height if self.certificate else None


def quad_hmin(q: QuadIdeal, mode: str = "exact") -> HminReport:
    """
    Smallest height of a primitive element of I = <a, b + g*delta> and the bounds around it.

    The oracle walks alpha = x*a + y*(b + g*delta) for y = 1, 2, ... and,
    for each y, x outward from the point where the trace vanishes. Since
    M(alpha) >= max |sigma_j(alpha)|, a row stops once |Tr alpha|/2 exceeds
    the best Mahler measure, and the walk stops once |y| g sqrt|disc| / 2
    does. alpha and -alpha share a height, so y < 0 is skipped.

    Args:
        q: Canonical quadratic ideal
        mode: "exact" runs the oracle, "bounds" only evaluates the bounds

    Raises:
        EnumerationBudgetExceeded: If N(I) exceeds the oracle cap or the walk exceeds the budget
    """
    if mode not in ("exact", "bounds"):
        raise InvalidInput(f"unknown h_min mode {mode!r}")
    D, a, b, g = q.D, q.a, q.b, q.g
    disc = quad_disc(D)
    N = ideal_norm(q)
    upper_witness = q.second
    report = HminReport(
        ideal=q, norm=N,
        lower=hmin_lower(a, g),
        lower_imaginary=hmin_lower_imaginary(D, g) if D < 0 else None,
        upper=hmin_upper(D, b, g),
        baseline=ideal_baseline(2, N, disc),
        upper_witness=upper_witness,
        upper_witness_height=_height_from_mahler(quadratic_mahler(upper_witness), 2),
    )
    if q.closed_form_mismatch:
        report.flags.append("closed-form-norm-mismatch")
    if mode == "bounds":
        return report
    if N > Var.HMIN_NORM_CAP:
        raise EnumerationBudgetExceeded(f"N(I) = {N} exceeds the h_min oracle cap {Var.HMIN_NORM_CAP}")

    trace_delta = 1 if D % 4 == 1 else 0
    c = 2 * b + g * trace_delta
    row_step = cr.div(cr.mul(Fraction(g), cr.sqrt_rational(abs(disc))), Fraction(2))

    best_xy = (0, 1)
    best = quadratic_mahler(upper_witness)
    examined = 1
    min_norm = abs(norm(upper_witness))
    y = 1
    while cr.compare(cr.mul(Fraction(y), row_step), best) != Ordering.GREATER:
        centre = floor(Fraction(-y * c, 2 * a) + Fraction(1, 2))
        for direction in (1, -1):
            x = centre if direction == 1 else centre - 1
            while cr.compare(Fraction(abs(2 * x * a + y * c), 2), best) != Ordering.GREATER:
                examined += 1
                if examined > Var.ENUMERATION_BUDGET:
                    raise EnumerationBudgetExceeded(f"h_min walk for {q} exceeded {Var.ENUMERATION_BUDGET} elements")
                alpha = q.element(x, y)
                min_norm = min(min_norm, abs(norm(alpha)))
                M = quadratic_mahler(alpha)
                if cr.compare(M, best) == Ordering.LESS:
                    best, best_xy = M, (x, y)
                x += direction
        progress.log("debug", f"h_min walk for {q} at row y = {y}", key=f"hmin-{q}")
        y += 1

    witness = q.element(*best_xy)
    h = _height_from_mahler(best, 2)
    cert = HeightCertificate(
        element=witness, height=h, mahler=best, bound_name=BoundName.HMIN_UPPER, bound=report.upper,
        inputs={"D": D, "a": a, "b": b, "g": g, "norm": N, "x": best_xy[0], "y": best_xy[1],
                "lower": report.lower, "lower_imaginary": report.lower_imaginary},
        baselines={"field": field_baseline(2, disc), "ideal": report.baseline},
    )
    cert.checks.append(Check("element-in-ideal", q.ideal.contains(witness)))
    cert.checks.append(Check("element-primitive", is_primitive(witness)))
    cert.checks.append(Check("height-within-upper", mahler_within(best, report.upper, 2), "bound"))
    lower_sq = cr.mul(report.lower, report.lower)
    cert.checks.append(Check("height-above-lower", _le(lower_sq, best), "bound"))
    if cr.compare(lower_sq, best) == Ordering.EQUAL:
        report.flags.append("lower-bound-attained")
    if report.lower_imaginary is not None:
        extra_sq = cr.mul(report.lower_imaginary, report.lower_imaginary)
        cert.checks.append(Check("height-above-imaginary-lower", _le(extra_sq, best), "bound"))
        if cr.compare(extra_sq, best) == Ordering.EQUAL:
            report.flags.append("imaginary-lower-bound-attained")
    cert.checks.append(Check("norms-at-least-ideal-norm", min_norm >= N))
    cert.flags = list(report.flags)
    report.certificate = cert
    report.examined = examined
    report.min_norm = min_norm
    logger.info(f"h_min{q} = {cr.to_decimal(h, 12)} at (x, y) = {best_xy} after {examined} elements"
                + (f", flags {report.flags}" if report.flags else ""))
    return report


# ---------------------------------------------------------------------------
# Primitive elements avoiding ideals

def _ideal_problem(I: AnyIdeal, Js: Sequence[AnyIdeal]):
    I = _as_integral(I)
    Js = [_as_integral(J) for J in Js]
    if not Js:
        raise InvalidInput("at least one ideal to avoid is required")
    if len(set(Js)) != len(Js):
        raise InvalidInput("the ideals to avoid must be distinct")
    subs = [ideal_sublattice(I, J) for J in Js]
    for J, sub in zip(Js, subs):
        if sub.index == 1:
            raise InvalidInput(f"{J!r} equals I; the avoided ideals must be proper")
    J = Js[0]
    for other in Js[1:]:
        J = ideal_product(J, other)
    omega = ideal_lattice(I)
    problem = AvoidanceProblem(omega, subs, PrimitivityPredicate(I.field, I.module), core=ideal_sublattice(I, J))
    return I, Js, J, problem


def _ideal_certificate(I: IntegralIdeal, Js: List[IntegralIdeal], J: IntegralIdeal, avoidance: AvoidanceCertificate,
                       problem: AvoidanceProblem, bound: CertifiedReal, bound_name: BoundName) -> HeightCertificate:
    K = I.field
    d = K.degree
    alpha = problem.predicate.element(avoidance.z)
    M = _field_mahler(alpha)
    disc = K.basis_discriminant
    cert = HeightCertificate(
        element=alpha, height=_height_from_mahler(M, d), mahler=M, bound_name=bound_name, bound=bound,
        inputs={"d": d, "r2": K.r2, "norm_I": I.norm, "norms_J": [Ji.norm for Ji in Js], "norm_J": J.norm,
                "disc": disc},
        baselines={"field": field_baseline(d, disc), "ideal": ideal_baseline(d, I.norm, disc)},
        avoidance=avoidance, problem=problem,
    )
    cert.checks.append(Check("element-in-ideal", I.contains(alpha)))
    for i, Ji in enumerate(Js):
        cert.checks.append(Check(f"element-outside-ideal-{i}", not Ji.contains(alpha)))
    cert.checks.append(Check("element-primitive", is_primitive(alpha)))
    lambda1 = avoidance.inputs["lambda"][0]
    cert.checks.append(Check("first-minimum-sandwich", _le(Fraction(1), lambda1) and _le(lambda1, Fraction(J.norm)),
                             "bound"))
    cert.checks.append(Check("height-within-bound", mahler_within(M, bound, d), "bound"))
    if not K.is_maximal:
        cert.flags.append("non-maximal-order")
    return cert


def primitive_in_ideal_avoiding(I: AnyIdeal, Js: Sequence[AnyIdeal]) -> HeightCertificate:
    """
    A primitive element of I outside every J_i with bounded height.

    The core lattice is the Minkowski image of the product J_1 ... J_s,
    which lies inside the intersection.

    Raises:
        NotContained: If some J_i is not inside I
        InvalidInput: If the J_i are not distinct proper subideals
    """
    I, Js, J, problem = _ideal_problem(I, Js)
    K = I.field
    bound = avoiding_primitive_bound(K.degree, K.r2, I.norm, [Ji.norm for Ji in Js], J.norm, K.basis_discriminant)
    avoidance = avoid_point(problem)
    cert = _ideal_certificate(I, Js, J, avoidance, problem, bound, BoundName.AVOIDING_PRIMITIVE)
    logger.info(f"Primitive element {cert.element.coords} with height {cr.to_decimal(cert.height, 12)} "
                f"<= {cr.to_decimal(bound, 12)}")
    return cert


def totally_positive_primitive(I: AnyIdeal, Js: Sequence[AnyIdeal]) -> HeightCertificate:
    """
    A totally positive primitive element of I outside every J_i.

    Raises:
        NotTotallyReal: If the field has complex embeddings
    """
    if not _as_integral(I).field.is_totally_real:
        raise NotTotallyReal("totally positive elements need a totally real field")
    I, Js, J, problem = _ideal_problem(I, Js)
    K = I.field
    d, disc = K.degree, K.basis_discriminant
    bound = totally_positive_bound(d, I.norm, [Ji.norm for Ji in Js], J.norm, disc)
    avoidance = positive_avoid_point(problem)
    cert = _ideal_certificate(I, Js, J, avoidance, problem, bound, BoundName.TOTALLY_POSITIVE)
    conjugates = embed(cert.element).real
    cert.checks.append(Check("element-totally-positive", all(_nonnegative(v) for v in conjugates)))

    minima = avoidance.inputs["lambda"]
    mu = avoidance.inputs["mu_upper"]
    sum_estimate = minima_sum_estimate(d, J.norm, disc)
    mu_estimate = covering_radius_estimate(d, J.norm, disc)
    cert.inputs.update({"minima_sum_estimate": sum_estimate, "covering_radius_estimate": mu_estimate})
    cert.checks.append(Check("minima-sum-estimate", _le(cr.sum_(minima), sum_estimate), "bound"))
    if not _le(mu, mu_estimate):
        cert.flags.append("covering-radius-above-estimate")
    cert.flags.append("conservative-covering-radius")
    logger.info(f"Totally positive element {cert.element.coords} with height {cr.to_decimal(cert.height, 12)}")
    return cert


def _nonnegative(v: CertifiedReal) -> bool:
    try:
        return cr.sign(v) >= 0
    except PrecisionExhausted:
        return False


# ---------------------------------------------------------------------------
# Non-sparse generating polynomials

def _evaluate_at(f: IntPolynomial, alpha: AlgebraicInteger) -> AlgebraicInteger:
    acc = alpha.field.rational(0)
    for c in reversed(f.coeffs):
        acc = acc * alpha + alpha.field.rational(c)
    return acc


def nonsparse_generator(K: NumberField) -> Tuple[IntPolynomial, HeightCertificate]:
    """
    A monic irreducible polynomial with all d + 1 coefficients nonzero that generates K.

    alpha = sum xi_k v_k over the successive-minima vectors of the Minkowski
    image of O_K, with xi walking S^d for S = {-h, ..., h},
    h = d(d-1)/2 + 1, by ascending max |xi_k| and then zig-zag order.

    Raises:
        InvalidInput: If the degree exceeds the grid cap
        GridExhausted: If no grid point works
    """
    d = K.degree
    if d > Var.GRID_DEGREE_CAP:
        raise InvalidInput(f"degree {d} exceeds the non-sparse grid cap {Var.GRID_DEGREE_CAP}")
    unit = IntegralIdeal.unit(K)
    omega = ideal_lattice(unit)
    minima = successive_minima(omega)
    h = d * (d - 1) // 2 + 1
    grid = [(v, _zigzag_rank(v)) for v in range(-h, h + 1)]
    predicate = NonsparsePredicate(K, unit.module)
    vectors = [tuple(v) for v in minima.vectors]
    try:
        xi, z = cn_select(omega, vectors[0], vectors[1:], predicate, [list(grid) for _ in range(d)])
    except NullstellensatzFailure:
        raise GridExhausted(f"no grid point of S^{d} gives a non-sparse generator") from None

    alpha = predicate.element(z.coords)
    f = char_poly(alpha)
    M = mahler_measure(f)
    disc = K.basis_discriminant
    bound = nonsparse_mahler_bound(d, K.r2, disc)
    cert = HeightCertificate(
        element=alpha, height=_height_from_mahler(M, d), mahler=M, bound_name=BoundName.NONSPARSE_MAHLER,
        bound=bound, bound_target="mahler",
        inputs={"d": d, "r2": K.r2, "disc": disc, "xi": list(xi), "polynomial": list(f.coeffs),
                "lambda": list(minima.values), "minima_vectors": [list(v) for v in vectors]},
        baselines={"field": field_baseline(d, disc), "mahler": mahler_baseline(disc)},
    )
    cert.checks.append(Check("polynomial-monic", f.is_monic))
    cert.checks.append(Check("polynomial-degree", f.degree == d))
    cert.checks.append(Check("coefficients-nonzero", f.all_coefficients_nonzero()))
    cert.checks.append(Check("discriminant-nonzero", f.discriminant() != 0))
    cert.checks.append(Check("root-of-polynomial", _evaluate_at(f, alpha).is_zero))
    cert.checks.append(Check("mahler-within-bound", mahler_within(M, bound, d, "mahler"), "bound"))
    logger.info(f"Non-sparse generator {f} at xi = {xi}, M(f) = {cr.to_decimal(M, 12)}")
    return f, cert


# ---------------------------------------------------------------------------
# Principal generators of quadratic ideals

def _by_box_level(limit: int):
    """(x, y) with max(|x|, |y|) <= limit by level, then zig-zag rank of y, then of x."""
    for t in range(limit + 1):
        span = sorted(range(-t, t + 1), key=_zigzag_rank)
        for y in span:
            for x in span:
                if max(abs(x), abs(y)) == t:
                    yield x, y


def definite_form_minimum(form: NormForm) -> int:
    """Least value of a positive definite form at a nonzero integer point."""
    disc = -form.discriminant
    ceiling = min(form.A, form.C)
    y_max = isqrt(4 * form.A * ceiling // disc) + 1
    x_max = isqrt(4 * form.C * ceiling // disc) + 1
    return min(form(x, y) for x in range(-x_max, x_max + 1) for y in range(-y_max, y_max + 1) if x or y)


def principal_generator_quad(q: QuadIdeal, cap: Optional[int] = None) -> HeightCertificate:
    """
    A generator mu of I found by solving f_I(x, y) = +-1.

    For D < 0 the form is positive definite and the finite search is
    decisive. For D > 0 the box |x|, |y| <= min((14H)^(5H), cap) is searched
    and an empty search is only decisive when it covers the whole box.

    Raises:
        NotPrincipal: If no solution exists
        Inconclusive: If the capped search found nothing
    """
    cap = cap or Var.GENERATOR_CAP
    form, H = norm_form(q)
    D = q.D
    N = ideal_norm(q)
    extra: Dict[str, object] = {"closed_form_height": closed_form_height(q)}

    if D < 0:
        disc = -form.discriminant
        minimum = definite_form_minimum(form)
        extra["form_minimum"] = minimum
        if minimum > 1:
            raise NotPrincipal(f"{q} is not principal: f_I = {form} has minimum {minimum}", form_minimum=minimum)
        limit = max(isqrt(4 * form.A // disc), isqrt(4 * form.C // disc)) + 1
        decisive = True
    else:
        full = kornhauser_box(H)
        limit = min(full, cap)
        decisive = limit >= full

    solution = None
    searched = 0
    for x, y in _by_box_level(limit):
        searched += 1
        if abs(form(x, y)) == 1:
            solution = (x, y)
            break
        progress.log("debug", f"Generator search for {q} at {searched} points", key=f"gen-{q}")
    if solution is None:
        if decisive:
            raise NotPrincipal(f"{q} is not principal: f_I = {form} never takes the values +-1")
        raise Inconclusive(f"no solution of f_I = +-1 for {q} with |x|, |y| <= {limit}; the proven box is "
                           f"(14H)^(5H) with H = {H}", searched=searched)

    x, y = solution
    mu = q.element(x, y)
    M = _field_mahler(mu)
    bound = principal_generator_bound(D, q.a, q.b, q.g, H)
    generated = IntegralIdeal.principal(q.field, mu)
    cert = HeightCertificate(
        element=mu, height=_height_from_mahler(M, 2), mahler=M, bound_name=BoundName.PRINCIPAL_GENERATOR,
        bound=bound,
        inputs={"D": D, "a": q.a, "b": q.b, "g": q.g, "H": H, "norm": N, "x": x, "y": y,
                "form": [form.A, form.B, form.C], "searched": searched, **extra},
        baselines={"field": field_baseline(2, quad_disc(D))},
    )
    cert.checks.append(Check("element-in-ideal", q.ideal.contains(mu)))
    cert.checks.append(Check("norm-matches-ideal", abs(norm(mu)) == N))
    cert.checks.append(Check("first-generator-divisible", generated.contains(q.first)))
    cert.checks.append(Check("second-generator-divisible", generated.contains(q.second)))
    cert.checks.append(Check("height-within-bound", mahler_within(M, bound, 2), "bound"))
    if form(x, y) == -1:
        cert.flags.append("negative-norm-generator")
    if y == 0:
        cert.flags.append("rational-generator")
    if Fraction(H) != closed_form_height(q):
        cert.flags.append("closed-form-height-differs")
    logger.info(f"Generator of {q}: {mu.coords} from (x, y) = {solution}, h = {cr.to_decimal(cert.height, 12)}")
    return cert

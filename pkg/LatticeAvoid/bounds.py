"""
Closed-form bounds.

Every function takes the ingredients a certificate records and returns a
certified real, so the drivers and the independent checker evaluate the
same expressions from the same inputs.
"""

from enum import Enum
from fractions import Fraction
from math import comb
from typing import Sequence

from .config import Var
from .core import certified_reals as cr
from .core.certified_reals import CertifiedReal


class BoundName(str, Enum):
    HMIN_UPPER = "hmin-upper"
    HMIN_LOWER = "hmin-lower"
    AVOIDING_PRIMITIVE = "avoiding-primitive"
    TOTALLY_POSITIVE = "totally-positive"
    NONSPARSE_MAHLER = "nonsparse-mahler"
    PRINCIPAL_GENERATOR = "principal-generator"
    BASELINE = "baseline"
    AVOIDANCE = "avoidance"
    POSITIVE_AVOIDANCE = "positive-avoidance"


def cube_volume(r1: int, r2: int) -> CertifiedReal:
    """Volume of the sup-norm unit ball of R^r1 x C^r2."""
    base = Fraction(2 ** r1)
    return base if r2 == 0 else cr.mul(base, cr.power(cr.pi_value(), r2))


def _avoidance_sum(indices: Sequence[int], D: int, lambda1: CertifiedReal, det: CertifiedReal, d: int) -> CertifiedReal:
    """sum 1/D_i - (s-1)/D + lambda_1^d / (D * det)."""
    s = len(indices)
    total = sum((Fraction(1, Di) for Di in indices), Fraction(0)) - Fraction(s - 1, D)
    return cr.add(total, cr.div(cr.power(lambda1, d), cr.mul(Fraction(D), det)))


def henk_thiel_bound(d: int, indices: Sequence[int], D: int, det: CertifiedReal,
                     lambda1: CertifiedReal, volume: CertifiedReal) -> CertifiedReal:
    """Strict upper bound on the shortest point of Omega outside the union of sublattices."""
    prefactor = cr.div(cr.mul(Fraction(2 ** d * D), det),
                       cr.mul(cr.power(lambda1, d - 1), volume))
    return cr.mul(prefactor, _avoidance_sum(indices, D, lambda1, det, d))


def minkowski_last_minimum(d: int, D: int, det: CertifiedReal, lambda1: CertifiedReal,
                           volume: CertifiedReal) -> CertifiedReal:
    """lambda_d(Lambda) <= 2^d D det / (lambda_1^(d-1) Vol)."""
    return cr.div(cr.mul(Fraction(2 ** d * D), det), cr.mul(cr.power(lambda1, d - 1), volume))


def avoidance_bound(d: int, m: int, indices: Sequence[int], D: int, det: CertifiedReal,
                    lambda1: CertifiedReal, volume: CertifiedReal) -> CertifiedReal:
    """Sup-norm bound for a point outside the sublattices where P does not vanish."""
    head = cr.div(Fraction(d * (D * (m + 2) + 2) * D), cr.mul(Fraction(2), cr.power(lambda1, d - 1)))
    head = cr.mul(head, det)
    tail = cr.mul(cr.div(Fraction(2 ** d), volume), _avoidance_sum(indices, D, lambda1, det, d))
    return cr.mul(head, cr.maximum(Fraction(1), tail))


def construction_bound(d: int, xi: Sequence[int], x_norm: CertifiedReal, lambda_d: CertifiedReal) -> CertifiedReal:
    """d * max|xi_i| * max{|x|, lambda_d}."""
    return cr.mul(Fraction(d * max(abs(v) for v in xi)), cr.maximum(x_norm, lambda_d))


def positive_avoidance_bound(d: int, m: int, indices: Sequence[int], D: int, det: CertifiedReal,
                             minima: Sequence[CertifiedReal], mu: CertifiedReal) -> CertifiedReal:
    """Sup-norm bound for a positive-orthant avoiding point, with mu an upper bound on the covering radius."""
    lambda1 = minima[0]
    inner = cr.mul(cr.div(cr.mul(Fraction(D), det), cr.power(lambda1, d - 1)),
                   _avoidance_sum(indices, D, lambda1, det, d))
    inner = cr.add(inner, cr.sum_(minima))
    return cr.mul(cr.mul(Fraction(D * (m + 2)), cr.add(mu, Fraction(1))), inner)


def anchor_bound(mu: CertifiedReal) -> CertifiedReal:
    """2 mu + 1."""
    return cr.add(cr.mul(Fraction(2), mu), Fraction(1))


def restricted_minimum_bound(lambda_i: CertifiedReal, mu: CertifiedReal) -> CertifiedReal:
    """2 lambda_i (mu + 1)."""
    return cr.mul(cr.mul(Fraction(2), lambda_i), cr.add(mu, Fraction(1)))


def shifted_vector_bound(lambda_i: CertifiedReal, mu: CertifiedReal) -> CertifiedReal:
    """2 (lambda_i + 1)(mu + 1) - 1."""
    return cr.sub(cr.mul(Fraction(2), cr.mul(cr.add(lambda_i, Fraction(1)), cr.add(mu, Fraction(1)))), Fraction(1))


def shifted_witness_bound(x_norm: CertifiedReal, mu: CertifiedReal) -> CertifiedReal:
    """2 ceil(|x|) (mu + 1) + |x|, which bounds |x + ceil(|x|) u_1|."""
    return cr.add(cr.mul(Fraction(2 * ceiling(x_norm)), cr.add(mu, Fraction(1))), x_norm)


def ceiling(x: CertifiedReal) -> int:
    """
    Smallest integer n >= x.

    An interval that cannot be separated from an integer n at the tie
    precision rounds up to n + 1, so the result never falls below x.
    """
    _, hi = cr.enclosure(x, 64)
    n = -((-hi.numerator) // hi.denominator)
    order = cr.compare(x, Fraction(n - 1), tie_bits=Var.TIE_PRECISION)
    if order == cr.Ordering.GREATER:
        return n
    if order == cr.Ordering.EQUAL and isinstance(cr._coerce(x), cr.IntervalReal):
        return n
    return n - 1


# ---------------------------------------------------------------------------
# Number field bounds

def root_abs_disc(disc: int) -> CertifiedReal:
    return cr.sqrt_rational(abs(disc))


def avoiding_primitive_bound(d: int, r2: int, norm_I: int, norms_J: Sequence[int], norm_J: int,
                             disc: int) -> CertifiedReal:
    """Height bound for a primitive element of I outside J_1, ..., J_s."""
    s = len(norms_J)
    root = root_abs_disc(disc)
    head = cr.mul(Fraction(d * norm_J * ((d * d - d + 4) * norm_J + 4 * norm_I), 4 * norm_I), root)
    ratio = sum((Fraction(norm_I, n) for n in norms_J), Fraction(0)) - Fraction((s - 1) * norm_I, norm_J)
    inner = cr.add(ratio, cr.div(Fraction(norm_J ** (d - 1)), root))
    if r2:
        inner = cr.mul(cr.power(cr.div(Fraction(2), cr.pi_value()), r2), inner)
    return cr.mul(head, cr.maximum(Fraction(1), inner))


def totally_positive_bound(d: int, norm_I: int, norms_J: Sequence[int], norm_J: int, disc: int) -> CertifiedReal:
    """Height bound for a totally positive primitive element of I outside J_1, ..., J_s."""
    s = len(norms_J)
    root = root_abs_disc(disc)
    nj_root = cr.mul(Fraction(norm_J), root)
    mu_term = cr.add(cr.mul(cr.div(cr.power(cr.sqrt_rational(d), 3), Fraction(2)), nj_root), Fraction(1))
    head = cr.mul(Fraction(comb(d, 2) + 2), mu_term)
    head = cr.mul(head, cr.div(cr.mul(Fraction(norm_J ** 2), root), Fraction(norm_I)))
    ratio = sum((Fraction(norm_I, n) for n in norms_J), Fraction(0)) - Fraction((s - 1) * norm_I, norm_J)
    tail = cr.add(ratio, cr.div(Fraction(norm_J ** (d - 1)), root))
    tail = cr.add(tail, cr.mul(Fraction(d), cr.power(nj_root, d - 1)))
    return cr.mul(head, tail)


def minima_sum_estimate(d: int, norm_J: int, disc: int) -> CertifiedReal:
    """d (N(J) sqrt|disc|)^d, an upper bound on the sum of the minima of Sigma(J)."""
    return cr.mul(Fraction(d), cr.power(cr.mul(Fraction(norm_J), root_abs_disc(disc)), d))


def covering_radius_estimate(d: int, norm_J: int, disc: int) -> CertifiedReal:
    """(d^(3/2) / 2) N(J) sqrt|disc|."""
    return cr.mul(cr.div(cr.power(cr.sqrt_rational(d), 3), Fraction(2)),
                  cr.mul(Fraction(norm_J), root_abs_disc(disc)))


def nonsparse_mahler_bound(d: int, r2: int, disc: int) -> CertifiedReal:
    """{(4/pi)^r2 * d(d^2 - d + 2)/2 * sqrt|disc|}^d."""
    base = cr.mul(Fraction(d * (d * d - d + 2), 2), root_abs_disc(disc))
    if r2:
        base = cr.mul(cr.power(cr.div(Fraction(4), cr.pi_value()), r2), base)
    return cr.power(base, d)


def field_baseline(d: int, disc: int) -> CertifiedReal:
    """|disc|^(1/d), the height of some primitive element of O_K."""
    return cr.nth_root(Fraction(abs(disc)), d)


def ideal_baseline(d: int, norm_I: int, disc: int) -> CertifiedReal:
    """N(I)^(2/d) |disc|^(1/d)."""
    return cr.nth_root(Fraction(norm_I ** 2 * abs(disc)), d)


def mahler_baseline(disc: int) -> Fraction:
    """M(f) <= |disc| for the minimal polynomial of a small primitive element."""
    return Fraction(abs(disc))


# ---------------------------------------------------------------------------
# Quadratic bounds

def quad_disc(D: int) -> int:
    return D if D % 4 == 1 else 4 * D


def hmin_lower(a: int, g: int) -> CertifiedReal:
    """sqrt(ag)."""
    return cr.sqrt_rational(a * g)


def hmin_lower_imaginary(D: int, g: int) -> CertifiedReal:
    """g sqrt|disc| / 2, only meaningful for D < 0."""
    return cr.mul(Fraction(g, 2), root_abs_disc(quad_disc(D)))


def hmin_upper(D: int, b: int, g: int) -> CertifiedReal:
    """g(2b + sqrt|disc|)/2, with 2b + 1 in place of 2b when D = 1 mod 4."""
    shift = 2 * b + 1 if D % 4 == 1 else 2 * b
    return cr.mul(Fraction(g, 2), cr.add(Fraction(shift), root_abs_disc(quad_disc(D))))


def principal_generator_bound(D: int, a: int, b: int, g: int, H: int) -> CertifiedReal:
    """(a + b + g sqrt|D|)(14H)^(5H), or (a + (2b + g + g sqrt|D|)/2)(14H)^(5H) when D = 1 mod 4."""
    root = cr.sqrt_rational(abs(D))
    if D % 4 == 1:
        base = cr.add(Fraction(a), cr.div(cr.add(Fraction(2 * b + g), cr.mul(Fraction(g), root)), Fraction(2)))
    else:
        base = cr.add(Fraction(a + b), cr.mul(Fraction(g), root))
    return cr.mul(base, Fraction((14 * H) ** (5 * H)))


def kornhauser_box(H: int) -> int:
    """(14H)^(5H)."""
    return (14 * H) ** (5 * H)

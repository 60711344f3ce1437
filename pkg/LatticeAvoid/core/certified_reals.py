"""
Certified real arithmetic.

Three kinds of values flow through the library:

- ``Fraction`` for exact rationals,
- ``QuadValue`` for exact numbers p + q*sqrt(D) with rational p, q and a
  squarefree integer radicand D,
- ``IntervalReal`` for everything else: a dyadic enclosure [lo, hi] plus a
  memoised refiner that can produce narrower enclosures of the same real.

Comparisons are exact whenever both operands are exact and share a radicand;
otherwise enclosures are refined by doubling the precision until they
separate, and ``PrecisionExhausted`` is raised at the configured cap. Two
intervals are never declared equal unless both values are exact.

The module also holds the complex ball arithmetic and the certified root
isolation used for embeddings of generic number fields and Mahler measures.
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath.libmp.libhyper import NoConvergence
from sympy import integer_nthroot
from sympy.ntheory.factor_ import core

from ..config import Var
from ..utils.exceptions import PrecisionExhausted

logger = logging.getLogger(__name__)

Enclosure = Tuple[Fraction, Fraction]

# Extra internal bits a refiner may spend beyond the user-facing cap.
_INTERNAL_SLACK = 512


class Ordering(IntEnum):
    """Result of a certified comparison."""
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _pow2(bits: int) -> Fraction:
    return Fraction(1, 1 << bits) if bits >= 0 else Fraction(1 << -bits)


def _bit_size(x: Fraction) -> int:
    """Rough upper bound for log2|x|, never negative."""
    x = abs(x)
    if x == 0:
        return 0
    return max(0, x.numerator.bit_length() - x.denominator.bit_length() + 1)


def _floor_scaled(x: Fraction, bits: int) -> int:
    return (x.numerator << bits) // x.denominator


def _ceil_scaled(x: Fraction, bits: int) -> int:
    return -((-x.numerator << bits) // x.denominator)


def _round_outward(lo: Fraction, hi: Fraction, bits: int) -> Enclosure:
    """Round an enclosure outward onto the dyadic grid 2^-bits."""
    scale = 1 << bits
    return Fraction(_floor_scaled(lo, bits), scale), Fraction(_ceil_scaled(hi, bits), scale)


def _sqrt_floor(x: Fraction, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    return Fraction(isqrt(_floor_scaled(x, 2 * bits)), 1 << bits)


def _sqrt_ceil(x: Fraction, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    y = _ceil_scaled(x, 2 * bits)
    r = isqrt(y)
    if r * r < y:
        r += 1
    return Fraction(r, 1 << bits)


def _root_floor(x: Fraction, n: int, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    r, _ = integer_nthroot(_floor_scaled(x, n * bits), n)
    return Fraction(int(r), 1 << bits)


def _root_ceil(x: Fraction, n: int, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    r, exact = integer_nthroot(_ceil_scaled(x, n * bits), n)
    r = int(r)
    if not exact:
        r += 1
    return Fraction(r, 1 << bits)


@lru_cache(maxsize=4096)
def _is_squarefree(n: int) -> bool:
    return int(core(n, 2)) == n


@dataclass(frozen=True)
class QuadValue:
    """Exact value p + q*sqrt(D) with D a squarefree integer other than 0 and 1."""
    p: Fraction
    q: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.D in (0, 1) or not _is_squarefree(abs(self.D)):
            raise ValueError(f"QuadValue radicand must be squarefree and not 0 or 1, got {self.D}")

    @property
    def is_real(self) -> bool:
        return self.D > 0 or self.q == 0

    def _same(self, other) -> Optional["QuadValue"]:
        if isinstance(other, (int, Fraction)):
            return QuadValue(other, 0, self.D)
        if isinstance(other, QuadValue) and other.D == self.D:
            return other
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadValue(self.p + o.p, self.q + o.q, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadValue(-self.p, -self.q, self.D)

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadValue(self.p - o.p, self.q - o.q, self.D)

    def __rsub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadValue(o.p - self.p, o.q - self.q, self.D)

    def __mul__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return QuadValue(self.p * o.p + self.q * o.q * self.D, self.p * o.q + self.q * o.p, self.D)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadValue":
        return QuadValue(self.p, -self.q, self.D)

    def norm(self) -> Fraction:
        """p^2 - q^2 D, the product with the conjugate."""
        return self.p * self.p - self.q * self.q * self.D

    def __truediv__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero QuadValue")
        num = self * o.conjugate()
        return QuadValue(num.p / n, num.q / n, self.D)

    def __rtruediv__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return o / self

    def sign(self) -> int:
        """Exact sign, decided by comparing p^2 against q^2 D."""
        if not self.is_real:
            raise ValueError(f"sign of non-real value {self}")
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq if sp == 0 else sp
        return sp if self.p * self.p > self.q * self.q * self.D else sq

    def __float__(self):
        return float(self.p) + float(self.q) * (abs(self.D) ** 0.5)

    def __str__(self):
        return f"{self.p} + {self.q}*sqrt({self.D})"


class _Source:
    """Memoised enclosure producer shared by every refinement of one real."""

    def __init__(self, compute: Callable[[int], Optional[Enclosure]]):
        self._compute = compute
        self._lock = threading.Lock()
        self._best: Optional[Enclosure] = None

    def __call__(self, bits: int) -> Enclosure:
        target = _pow2(bits)
        best = self._best
        if best is not None and best[1] - best[0] <= target:
            return best
        k = max(bits + 8, 16)
        limit = Var.PRECISION_CAP + _INTERNAL_SLACK
        while True:
            encl = self._compute(k)
            if encl is not None and encl[1] - encl[0] <= target / 2:
                result = _round_outward(encl[0], encl[1], bits + 2)
                with self._lock:
                    current = self._best
                    if current is None or result[1] - result[0] < current[1] - current[0]:
                        self._best = result
                return result
            if k > limit:
                raise PrecisionExhausted(f"refinement to 2^-{bits} did not converge within {limit} bits")
            k *= 2


@dataclass(frozen=True)
class IntervalReal:
    """A real number known through a dyadic enclosure and a refiner."""
    lo: Fraction
    hi: Fraction
    source: Optional[_Source] = field(default=None, compare=False, repr=False)
    exact: Optional[Fraction] = None

    @classmethod
    def from_function(cls, compute: Callable[[int], Optional[Enclosure]], bits: int = 16) -> "IntervalReal":
        """Build a real from compute(k), an enclosure evaluated at internal precision k."""
        src = _Source(compute)
        lo, hi = src(bits)
        return cls(lo, hi, src)

    @classmethod
    def of_exact(cls, value) -> "IntervalReal":
        value = Fraction(value)
        return cls(value, value, None, value)

    @classmethod
    def fixed(cls, lo, hi) -> "IntervalReal":
        """An enclosure that cannot be refined further."""
        return cls(Fraction(lo), Fraction(hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    def refined(self, bits: int) -> "IntervalReal":
        if self.exact is not None or self.width <= _pow2(bits):
            return self
        if self.source is None:
            raise PrecisionExhausted(f"fixed enclosure [{self.lo}, {self.hi}] cannot reach 2^-{bits}")
        lo, hi = self.source(bits)
        return IntervalReal(max(lo, self.lo), min(hi, self.hi), self.source)

    def __float__(self):
        return float((self.lo + self.hi) / 2)


CertifiedReal = Union[Fraction, QuadValue, IntervalReal]


def _coerce(x) -> CertifiedReal:
    if isinstance(x, bool):
        raise TypeError("booleans are not certified reals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, QuadValue):
        return x.p if x.q == 0 else x
    if isinstance(x, IntervalReal):
        return x.exact if x.exact is not None else x
    raise TypeError(f"unsupported certified real {x!r}")


def _quad_enclosure(v: QuadValue, bits: int) -> Enclosure:
    if v.q == 0:
        return v.p, v.p
    if v.D < 0:
        raise ValueError(f"non-real value {v} has no real enclosure")
    m = bits + 2 + _bit_size(v.q)
    s = isqrt(v.D << (2 * m))
    lo_root, hi_root = Fraction(s, 1 << m), Fraction(s + 1, 1 << m)
    if v.q > 0:
        return v.p + v.q * lo_root, v.p + v.q * hi_root
    return v.p + v.q * hi_root, v.p + v.q * lo_root


def enclosure(x, bits: int) -> Enclosure:
    """Rational bounds lo <= x <= hi with hi - lo <= 2^-bits."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        return x, x
    if isinstance(x, QuadValue):
        return _quad_enclosure(x, bits)
    if x.width <= _pow2(bits):
        return x.lo, x.hi
    if x.source is None:
        raise PrecisionExhausted(f"fixed enclosure [{x.lo}, {x.hi}] cannot reach 2^-{bits}")
    lo, hi = x.source(bits)
    return max(lo, x.lo), min(hi, x.hi)


def _bits_for(eps: Fraction) -> int:
    bits = 0
    while _pow2(bits) > eps:
        bits += 1
    return bits


def refine_to(v, eps) -> IntervalReal:
    """
    Return an enclosure of v of width at most eps.

    Raises:
        PrecisionExhausted: If eps is below the configured cap 2^-PRECISION_CAP
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps < _pow2(Var.PRECISION_CAP):
        raise PrecisionExhausted(f"requested width {eps} is below the cap 2^-{Var.PRECISION_CAP}")
    v = _coerce(v)
    if isinstance(v, Fraction):
        return IntervalReal.of_exact(v)
    bits = _bits_for(eps)
    if isinstance(v, QuadValue):
        lo, hi = enclosure(v, bits)
        return IntervalReal(lo, hi, _Source(lambda k: enclosure(v, k)))
    return v.refined(bits)


def to_interval(v) -> IntervalReal:
    v = _coerce(v)
    if isinstance(v, Fraction):
        return IntervalReal.of_exact(v)
    if isinstance(v, QuadValue):
        return IntervalReal.from_function(lambda k: enclosure(v, k))
    return v


def _exact_difference(a: CertifiedReal, b: CertifiedReal) -> Optional[CertifiedReal]:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    if isinstance(a, IntervalReal) or isinstance(b, IntervalReal):
        return None
    if isinstance(a, QuadValue) and isinstance(b, QuadValue) and a.D != b.D:
        return None
    diff = a - b
    return _coerce(diff)


def _is_exact(x: CertifiedReal) -> bool:
    return not isinstance(x, IntervalReal)


def compare(a, b, *, tie_bits: Optional[int] = None) -> Ordering:
    """
    Certified three-way comparison.

    Exact operands sharing a radicand are compared symbolically. Otherwise
    both enclosures are refined until they are disjoint.

    Args:
        a, b: Certified reals
        tie_bits: When given, overlapping enclosures at this precision are
            reported as EQUAL instead of refining further

    Raises:
        PrecisionExhausted: If the enclosures still overlap at the cap
    """
    a, b = _coerce(a), _coerce(b)
    diff = _exact_difference(a, b)
    if diff is not None:
        if isinstance(diff, QuadValue):
            return Ordering(diff.sign())
        return Ordering((diff > 0) - (diff < 0))
    cap = Var.PRECISION_CAP
    limit = min(tie_bits, cap) if tie_bits is not None else cap
    bits = 16
    while True:
        alo, ahi = enclosure(a, bits)
        blo, bhi = enclosure(b, bits)
        if ahi < blo:
            return Ordering.LESS
        if alo > bhi:
            return Ordering.GREATER
        if _is_exact(a) and _is_exact(b) and alo == ahi == blo == bhi:
            return Ordering.EQUAL
        if bits >= limit:
            if tie_bits is not None:
                return Ordering.EQUAL
            raise PrecisionExhausted(f"could not separate values at 2^-{cap}")
        bits = min(bits * 2, limit)


def sign(x) -> int:
    return int(compare(x, Fraction(0)))


def certified_nonzero(x) -> bool:
    """True only when x is proven nonzero."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        return x != 0
    if isinstance(x, QuadValue):
        return x.q != 0 or x.p != 0
    try:
        return compare(x, Fraction(0)) != Ordering.EQUAL
    except PrecisionExhausted:
        return False


def less_equal(a, b) -> bool:
    return compare(a, b) != Ordering.GREATER


def consistent(a, b, bits: Optional[int] = None) -> bool:
    """
    True when a and b cannot be told apart at 2^-bits.

    Exact operands sharing a radicand must be equal. Used to assert
    identities whose two sides are computed along different routes.
    """
    a, b = _coerce(a), _coerce(b)
    diff = _exact_difference(a, b)
    if diff is not None:
        return diff == 0
    bits = bits or Var.DEFAULT_PRECISION
    alo, ahi = enclosure(a, bits)
    blo, bhi = enclosure(b, bits)
    return alo <= bhi and blo <= ahi


# ---------------------------------------------------------------------------
# Interval extensions used by lifted operations. Each returns None when the
# inputs are too wide to produce a meaningful enclosure.

def _iv_add(a: Enclosure, b: Enclosure, k: int) -> Enclosure:
    return a[0] + b[0], a[1] + b[1]


def _iv_sub(a: Enclosure, b: Enclosure, k: int) -> Enclosure:
    return a[0] - b[1], a[1] - b[0]


def _iv_mul(a: Enclosure, b: Enclosure, k: int) -> Enclosure:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _iv_div(a: Enclosure, b: Enclosure, k: int) -> Optional[Enclosure]:
    if b[0] <= 0 <= b[1]:
        return None
    return _iv_mul(a, (1 / b[1], 1 / b[0]), k)


def _iv_abs(a: Enclosure, k: int) -> Enclosure:
    if a[0] >= 0:
        return a
    if a[1] <= 0:
        return -a[1], -a[0]
    return Fraction(0), max(-a[0], a[1])


def _iv_sqrt(a: Enclosure, k: int) -> Enclosure:
    if a[1] < 0:
        raise ValueError("square root of a negative value")
    return _sqrt_floor(max(a[0], Fraction(0)), k), _sqrt_ceil(a[1], k)


def _iv_root(n: int) -> Callable[[Enclosure, int], Enclosure]:
    def op(a: Enclosure, k: int) -> Enclosure:
        if a[1] < 0:
            raise ValueError("root of a negative value")
        return _root_floor(max(a[0], Fraction(0)), n, k), _root_ceil(a[1], n, k)
    return op


def _lift(op, *args: CertifiedReal) -> IntervalReal:
    def compute(k: int) -> Optional[Enclosure]:
        return op(*[enclosure(a, k) for a in args], k)
    return IntervalReal.from_function(compute)


def _same_field(a: CertifiedReal, b: CertifiedReal) -> bool:
    if isinstance(a, IntervalReal) or isinstance(b, IntervalReal):
        return False
    if isinstance(a, QuadValue) and isinstance(b, QuadValue):
        return a.D == b.D
    return True


def add(a, b) -> CertifiedReal:
    a, b = _coerce(a), _coerce(b)
    if _same_field(a, b):
        return _coerce(a + b)
    return _lift(_iv_add, a, b)


def sub(a, b) -> CertifiedReal:
    a, b = _coerce(a), _coerce(b)
    if _same_field(a, b):
        return _coerce(a - b)
    return _lift(_iv_sub, a, b)


def mul(a, b) -> CertifiedReal:
    a, b = _coerce(a), _coerce(b)
    if _same_field(a, b):
        return _coerce(a * b)
    return _lift(_iv_mul, a, b)


def div(a, b) -> CertifiedReal:
    a, b = _coerce(a), _coerce(b)
    if _same_field(a, b):
        return _coerce(a / b)
    return _lift(_iv_div, a, b)


def neg(a) -> CertifiedReal:
    a = _coerce(a)
    if isinstance(a, IntervalReal):
        return _lift(lambda e, k: (-e[1], -e[0]), a)
    return -a


def abs_(a) -> CertifiedReal:
    a = _coerce(a)
    if isinstance(a, Fraction):
        return abs(a)
    if isinstance(a, QuadValue):
        return a if a.sign() >= 0 else -a
    return _lift(_iv_abs, a)


def power(a, k: int) -> CertifiedReal:
    if k < 0:
        raise ValueError("negative exponent")
    result: CertifiedReal = Fraction(1)
    base = _coerce(a)
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def _hull(a, b, pick: Callable[[Fraction, Fraction], Fraction]) -> IntervalReal:
    def compute(k: int) -> Enclosure:
        alo, ahi = enclosure(a, k)
        blo, bhi = enclosure(b, k)
        return pick(alo, blo), pick(ahi, bhi)
    return IntervalReal.from_function(compute)


def _extremum(a, b, want: Ordering, pick) -> CertifiedReal:
    # values that agree to the tie precision come back as the enclosure of max/min
    a, b = _coerce(a), _coerce(b)
    order = compare(a, b, tie_bits=Var.TIE_PRECISION)
    if order == want:
        return a
    if order != Ordering.EQUAL:
        return b
    if _exact_difference(a, b) is not None:
        return a
    return _hull(a, b, pick)


def maximum(a, b) -> CertifiedReal:
    return _extremum(a, b, Ordering.GREATER, max)


def minimum(a, b) -> CertifiedReal:
    return _extremum(a, b, Ordering.LESS, min)


def sum_(values) -> CertifiedReal:
    total: CertifiedReal = Fraction(0)
    for v in values:
        total = add(total, v)
    return total


def product(values) -> CertifiedReal:
    total: CertifiedReal = Fraction(1)
    for v in values:
        total = mul(total, v)
    return total


def sqrt_rational(r) -> Union[Fraction, QuadValue]:
    """
    Exact square root of a non-negative rational.

    Returns a Fraction when r is a rational square, otherwise
    QuadValue(0, s, f) with f the squarefree part of numerator*denominator.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError(f"square root of negative rational {r}")
    if r == 0:
        return Fraction(0)
    m = r.numerator * r.denominator
    f = int(core(m, 2))
    s = isqrt(m // f)
    coeff = Fraction(s, r.denominator)
    if f == 1:
        return coeff
    return QuadValue(0, coeff, f)


def sqrt_(x) -> CertifiedReal:
    x = _coerce(x)
    if isinstance(x, Fraction):
        return sqrt_rational(x)
    if isinstance(x, QuadValue) and x.sign() < 0:
        raise ValueError(f"square root of negative value {x}")
    return _lift(_iv_sqrt, x)


def nth_root(x, n: int) -> CertifiedReal:
    if n < 1:
        raise ValueError("root index must be positive")
    if n == 1:
        return _coerce(x)
    if n == 2:
        return sqrt_(x)
    x = _coerce(x)
    if isinstance(x, Fraction):
        if x < 0:
            raise ValueError("root of negative rational")
        num, num_exact = integer_nthroot(x.numerator, n)
        den, den_exact = integer_nthroot(x.denominator, n)
        if num_exact and den_exact:
            return Fraction(int(num), int(den))
    return _lift(_iv_root(n), x)


@lru_cache(maxsize=1)
def pi_value() -> IntervalReal:
    """Certified enclosure of pi."""
    def compute(k: int) -> Enclosure:
        scale = 1 << (k + 8)
        with mpmath.workprec(k + 10):
            center = Fraction(int(mpmath.nint(+mpmath.mp.pi * scale)), scale)
        err = _pow2(k)
        return center - err, center + err
    return IntervalReal.from_function(compute)


def real_root(coeffs: Sequence[int], lo, hi) -> IntervalReal:
    """
    The unique root of a polynomial (coefficients low to high) in [lo, hi],
    refined by exact-sign bisection.
    """
    coeffs = [Fraction(c) for c in coeffs]
    lo, hi = Fraction(lo), Fraction(hi)

    def value(x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    s_lo, s_hi = value(lo), value(hi)
    if s_lo == 0:
        return IntervalReal.of_exact(lo)
    if s_hi == 0:
        return IntervalReal.of_exact(hi)
    if (s_lo > 0) == (s_hi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    negative_at_lo = s_lo < 0

    def compute(k: int) -> Enclosure:
        a, b = lo, hi
        target = _pow2(k)
        while b - a > target:
            mid = (a + b) / 2
            v = value(mid)
            if v == 0:
                return mid, mid
            if (v < 0) == negative_at_lo:
                a = mid
            else:
                b = mid
        return a, b

    return IntervalReal.from_function(compute)


def to_decimal(x, digits: int = 30) -> str:
    """Deterministic decimal rendering with the given number of significant digits."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
    else:
        lo, hi = enclosure(x, 16)
        magnitude = min(abs(lo), abs(hi))
        extra = 0 if magnitude >= 1 or magnitude == 0 else _bit_size(1 / magnitude)
        lo, hi = enclosure(x, int(digits * 3.33) + 16 + extra)
        mid = (lo + hi) / 2
        num, den = mid.numerator, mid.denominator
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(num) / den, digits)


def to_float(x) -> float:
    lo, hi = enclosure(x, 60)
    return float((lo + hi) / 2)


def exact_form(x) -> dict:
    """JSON-ready exact description of a certified real."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        return {"kind": "rational", "value": str(x)}
    if isinstance(x, QuadValue):
        return {"kind": "quadratic", "p": str(x.p), "q": str(x.q), "D": x.D}
    lo, hi = enclosure(x, Var.DEFAULT_PRECISION)
    return {"kind": "interval", "lo": str(lo), "hi": str(hi)}


def from_exact_form(data: dict) -> CertifiedReal:
    kind = data.get("kind")
    if kind == "rational":
        return Fraction(data["value"])
    if kind == "quadratic":
        return _coerce(QuadValue(Fraction(data["p"]), Fraction(data["q"]), int(data["D"])))
    if kind == "interval":
        return IntervalReal.fixed(Fraction(data["lo"]), Fraction(data["hi"]))
    raise ValueError(f"unknown exact form {data!r}")


# ---------------------------------------------------------------------------
# Complex balls and certified root isolation

@dataclass(frozen=True)
class ComplexBall:
    """Closed disc with Gaussian-rational center (re, im) and radius rad."""
    re: Fraction
    im: Fraction
    rad: Fraction

    @classmethod
    def point(cls, re, im=0) -> "ComplexBall":
        return cls(Fraction(re), Fraction(im), Fraction(0))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def _abs_upper(self) -> Fraction:
        return abs(self.re) + abs(self.im)

    def __add__(self, other: "ComplexBall") -> "ComplexBall":
        return ComplexBall(self.re + other.re, self.im + other.im, self.rad + other.rad)

    def __mul__(self, other: "ComplexBall") -> "ComplexBall":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        rad = self._abs_upper() * other.rad + other._abs_upper() * self.rad + self.rad * other.rad
        return ComplexBall(re, im, rad)

    def scale(self, c) -> "ComplexBall":
        c = Fraction(c)
        return ComplexBall(self.re * c, self.im * c, self.rad * abs(c))

    def rounded(self, bits: int) -> "ComplexBall":
        """Snap the center to the grid 2^-bits, absorbing the shift into the radius."""
        scale = 1 << bits
        re = Fraction(_floor_scaled(self.re, bits), scale)
        im = Fraction(_floor_scaled(self.im, bits), scale)
        return ComplexBall(re, im, self.rad + (self.re - re) + (self.im - im))

    def real_enclosure(self) -> Enclosure:
        return self.re - self.rad, self.re + self.rad

    def imag_enclosure(self) -> Enclosure:
        return self.im - self.rad, self.im + self.rad

    def modulus_enclosure(self, bits: int) -> Enclosure:
        c2 = self.re * self.re + self.im * self.im
        lo = _sqrt_floor(c2, bits) - self.rad
        return max(lo, Fraction(0)), _sqrt_ceil(c2, bits) + self.rad


def evaluate_ball(coeffs: Sequence[Fraction], z: ComplexBall, bits: int) -> ComplexBall:
    """Horner evaluation of a rational polynomial (low to high) on a ball."""
    acc = ComplexBall.point(0)
    for c in reversed(coeffs):
        acc = (acc * z + ComplexBall.point(c)).rounded(bits)
    return acc


def _gauss_eval(coeffs: Sequence[int], re: Fraction, im: Fraction) -> Tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _to_dyadic(value, bits: int) -> Fraction:
    return Fraction(int(mpmath.nint(value * (1 << bits))), 1 << bits)


def _try_isolate(coeffs: Sequence[int], work: int, bits: int) -> Optional[List[ComplexBall]]:
    n = len(coeffs) - 1
    try:
        with mpmath.workprec(work + 16):
            approx = mpmath.polyroots([int(c) for c in reversed(coeffs)],
                                      maxsteps=100 + 20 * n, extraprec=work)
            centers = [(_to_dyadic(mpmath.re(z), work), _to_dyadic(mpmath.im(z), work)) for z in approx]
    except NoConvergence:
        return None

    near_real = _pow2(max(work // 2, 8))
    centers = [(re, Fraction(0)) if abs(im) <= near_real else (re, im) for re, im in centers]
    if len(set(centers)) != n:
        return None

    lc2 = Fraction(coeffs[-1]) ** 2
    radii = []
    for i, (re_i, im_i) in enumerate(centers):
        fr, fi = _gauss_eval(coeffs, re_i, im_i)
        pr, pi = Fraction(1), Fraction(0)
        for j, (re_j, im_j) in enumerate(centers):
            if j != i:
                dr, di = re_i - re_j, im_i - im_j
                pr, pi = pr * dr - pi * di, pr * di + pi * dr
        denom = lc2 * (pr * pr + pi * pi)
        if denom == 0:
            return None
        radii.append(_sqrt_ceil(n * n * (fr * fr + fi * fi) / denom, work))

    target = _pow2(bits)
    for i in range(n):
        if radii[i] > target:
            return None
        re_i, im_i = centers[i]
        if im_i != 0 and abs(im_i) <= radii[i]:
            return None
        for j in range(i + 1, n):
            dr, di = re_i - centers[j][0], im_i - centers[j][1]
            if (radii[i] + radii[j]) ** 2 >= dr * dr + di * di:
                return None

    reals = sorted((ComplexBall(re, im, r) for (re, im), r in zip(centers, radii) if im == 0),
                   key=lambda b: b.re)
    upper = sorted((ComplexBall(re, im, r) for (re, im), r in zip(centers, radii) if im > 0),
                   key=lambda b: (b.re, b.im))
    lower = [1 for _, im in centers if im < 0]
    if len(upper) != len(lower):
        return None
    return reals + upper


def isolate_roots(coeffs: Sequence[int], bits: int) -> List[ComplexBall]:
    """
    Certified root balls of a squarefree integer polynomial (low to high).

    Every returned disc has radius at most 2^-bits and contains exactly one
    root. Real roots come first in ascending order and get centers on the
    real axis; then one representative with positive imaginary part per
    complex-conjugate pair, ordered by (Re, Im).

    Raises:
        PrecisionExhausted: If isolation fails below the internal limit
    """
    coeffs = [int(c) for c in coeffs]
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("constant polynomial has no roots")
    if n == 1:
        return [ComplexBall.point(Fraction(-coeffs[0], coeffs[1]))]
    work = max(bits, 32) + 16
    limit = Var.PRECISION_CAP + _INTERNAL_SLACK
    while True:
        balls = _try_isolate(coeffs, work, bits)
        if balls is not None:
            return balls
        if work > limit:
            raise PrecisionExhausted(f"root isolation failed for {coeffs} below {limit} bits")
        logger.debug(f"Root isolation retry at {2 * work} bits for {coeffs}")
        work *= 2

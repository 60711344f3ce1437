"""
Number fields, algebraic integers, embeddings and heights.

Quadratic fields Q(sqrt(D)) use the basis {1, delta} with delta = -sqrt(D)
for D != 1 mod 4 and delta = (1 - sqrt(D))/2 for D = 1 mod 4; their
embeddings are exact ``QuadValue``s with sigma_1 sending sqrt(D) to +sqrt(D).
Generic fields are given by a monic irreducible integer polynomial of degree
at most 8 together with an optional integral basis; their embeddings are
evaluated on certified root balls.

All arithmetic on algebraic integers is exact: elements are integer
coordinate vectors over the integral basis and multiply through the
structure constants of that basis. Norms, traces and characteristic
polynomials come from integer multiplication matrices.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Poly, QQ, ZZ, Rational, symbols
from sympy.polys.matrices import DomainMatrix
from sympy.polys.numberfields.basis import round_two

from ..config import Var
from ..utils.exceptions import InvalidInput, InvariantViolation
from . import certified_reals as cr
from .certified_reals import CertifiedReal, ComplexBall, QuadValue

logger = logging.getLogger(__name__)

_x = symbols("x")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial stored low degree first, without trailing zeros."""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs) or (0,))

    @classmethod
    def from_poly(cls, poly: Poly) -> "IntPolynomial":
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), _x, domain=ZZ)

    def discriminant(self) -> int:
        if self.degree < 1:
            raise ValueError("discriminant of a constant polynomial")
        if self.degree == 1:
            return 1
        return int(self.to_poly().discriminant())

    def all_coefficients_nonzero(self) -> bool:
        return all(c != 0 for c in self.coeffs)

    def __call__(self, value):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __str__(self):
        return str(self.to_poly().as_expr())


class NumberField:
    """
    A number field with a fixed integral basis.

    Attributes:
        degree: [K:Q]
        r1, r2: numbers of real embeddings and complex-conjugate pairs
        defining_poly: minimal polynomial of the generator theta
        basis: integral basis as power-basis coefficient vectors in theta
        mult_table: mult_table[i][j] = integer coordinates of omega_i * omega_j
        discriminant: field discriminant Delta_K
        basis_discriminant: discriminant of the supplied basis
        D: squarefree radicand for quadratic fields, None otherwise
    """

    def __init__(self, defining_poly: IntPolynomial, basis: Sequence[Sequence[Fraction]],
                 mult_table: Sequence[Sequence[Sequence[int]]], r1: int,
                 discriminant: int, D: Optional[int] = None):
        self.defining_poly = defining_poly
        self.degree = defining_poly.degree
        self.basis = [tuple(Fraction(c) for c in row) for row in basis]
        self.mult_table = [[tuple(int(c) for c in cell) for cell in row] for row in mult_table]
        self.r1 = r1
        self.r2 = (self.degree - r1) // 2
        self.discriminant = int(discriminant)
        self.D = D
        self.basis_discriminant = self._trace_form_determinant()
        self._root_lock = threading.Lock()
        self._root_cache: Tuple[int, List[ComplexBall]] = (-1, [])

        ratio = Fraction(self.basis_discriminant, self.discriminant)
        index = cr.sqrt_rational(ratio) if ratio > 0 else None
        if not isinstance(index, Fraction) or index.denominator != 1:
            raise InvariantViolation(
                f"basis discriminant {self.basis_discriminant} is not a square multiple of {self.discriminant}")
        if index != 1:
            logger.warning(f"Basis of {self} spans an order of index {index} in the ring of integers")

    # -- constructors -----------------------------------------------------

    @classmethod
    def quadratic(cls, D: int) -> "NumberField":
        """Q(sqrt(D)) with the basis {1, delta}."""
        D = int(D)
        if D in (0, 1) or not cr._is_squarefree(abs(D)):
            raise InvalidInput(f"D must be a squarefree integer other than 0 and 1, got {D}")
        if D % 4 == 1:
            poly = IntPolynomial((-(D - 1) // 4, -1, 1))
            delta_sq = (Fraction(D - 1, 4), 1)
            disc = D
        else:
            poly = IntPolynomial((-D, 0, 1))
            delta_sq = (D, 0)
            disc = 4 * D
        table = [[(1, 0), (0, 1)], [(0, 1), tuple(int(c) for c in delta_sq)]]
        return cls(poly, [(1, 0), (0, 1)], table, 2 if D > 0 else 0, disc, D)

    @classmethod
    def generic(cls, poly_coeffs: Sequence[int], basis: Optional[Sequence[Sequence]] = None) -> "NumberField":
        """
        Field defined by a monic irreducible polynomial (coefficients low to high).

        Args:
            poly_coeffs: Coefficients c_0..c_d with c_d = 1
            basis: Optional integral basis, each row the power-basis
                coefficients of one basis element; defaults to the power basis

        Raises:
            InvalidInput: If the polynomial is not monic, irreducible or too large
            InvariantViolation: If the basis is not closed under multiplication
        """
        poly = IntPolynomial(tuple(poly_coeffs))
        d = poly.degree
        if d < 1 or d > Var.MAX_DEGREE:
            raise InvalidInput(f"degree must be between 1 and {Var.MAX_DEGREE}, got {d}")
        if not poly.is_monic:
            raise InvalidInput(f"defining polynomial {poly} is not monic")
        sym = poly.to_poly()
        if d > 1 and not sym.is_irreducible:
            raise InvalidInput(f"defining polynomial {poly} is not irreducible")
        if basis is None:
            basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        basis = [[Fraction(c) for c in row] for row in basis]
        if len(basis) != d or any(len(row) != d for row in basis):
            raise InvalidInput("integral basis must be a d x d matrix")
        table = _structure_constants(poly, basis)
        r1 = int(sym.count_roots()) if d > 1 else 1
        field_disc = int(round_two(sym)[1]) if d > 1 else 1
        return cls(poly, basis, table, r1, field_disc, None)

    # -- structure ----------------------------------------------------------

    @property
    def is_quadratic(self) -> bool:
        return self.D is not None

    @property
    def is_maximal(self) -> bool:
        return self.basis_discriminant == self.discriminant

    @property
    def is_totally_real(self) -> bool:
        return self.r2 == 0

    def element(self, coords: Sequence[int]) -> "AlgebraicInteger":
        if len(coords) != self.degree:
            raise InvalidInput(f"expected {self.degree} coordinates, got {len(coords)}")
        return AlgebraicInteger(self, tuple(int(c) for c in coords))

    def one(self) -> "AlgebraicInteger":
        """The element 1, assuming omega_0 = 1 as in every supported basis."""
        return self.rational(1)

    def rational(self, n: int) -> "AlgebraicInteger":
        target = [Fraction(0)] * self.degree
        target[0] = Fraction(n)
        solved = _solve_rational(self.basis, target)
        if any(c.denominator != 1 for c in solved):
            raise InvariantViolation(f"{n} is not integral in the chosen basis")
        coords = [int(c) for c in solved]
        return AlgebraicInteger(self, tuple(coords))

    def _trace_form_determinant(self) -> int:
        d = self.degree
        traces = [[trace(_element_product_coords(self, i, j)) for j in range(d)] for i in range(d)]
        return int(DomainMatrix([[ZZ(t) for t in row] for row in traces], (d, d), ZZ).det())

    def descriptor(self) -> dict:
        if self.is_quadratic:
            return {"quadratic": self.D}
        out = {"poly": list(self.defining_poly.coeffs)}
        identity = [tuple(Fraction(int(i == j)) for j in range(self.degree)) for i in range(self.degree)]
        if self.basis != identity:
            out["basis"] = [[str(c) for c in row] for row in self.basis]
        return {"generic": out}

    def root_balls(self, bits: int) -> List[ComplexBall]:
        """Certified roots of the defining polynomial in embedding order."""
        cached_bits, balls = self._root_cache
        if cached_bits >= bits:
            return balls
        balls = cr.isolate_roots(self.defining_poly.coeffs, bits)
        real_count = sum(1 for b in balls if b.is_real)
        if real_count != self.r1:
            raise InvariantViolation(f"root isolation found {real_count} real roots, expected {self.r1}")
        with self._root_lock:
            if self._root_cache[0] < bits:
                self._root_cache = (bits, balls)
        return balls

    def __repr__(self):
        if self.is_quadratic:
            return f"NumberField(Q(sqrt({self.D})))"
        return f"NumberField({self.defining_poly})"


def _solve_rational(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> List[Fraction]:
    """Solve sum_i y_i * columns[i] = target exactly."""
    M = Matrix([[Rational(columns[j][i].numerator, columns[j][i].denominator) for j in range(len(columns))]
                for i in range(len(target))])
    rhs = Matrix([Rational(t.numerator, t.denominator) for t in target])
    sol = M.LUsolve(rhs)
    return [Fraction(int(v.p), int(v.q)) for v in sol]


def _structure_constants(poly: IntPolynomial, basis: Sequence[Sequence[Fraction]]) -> List[List[Tuple[int, ...]]]:
    d = poly.degree
    modulus = Poly(list(reversed(poly.coeffs)), _x, domain=QQ)
    as_polys = [Poly([Rational(c.numerator, c.denominator) for c in reversed(row)], _x, domain=QQ)
                for row in basis]
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            prod = (as_polys[i] * as_polys[j]).rem(modulus)
            coeffs = [Fraction(0)] * d
            for k, c in enumerate(reversed(prod.all_coeffs())):
                coeffs[k] = Fraction(int(c.p), int(c.q))
            solved = _solve_rational(basis, coeffs)
            if any(c.denominator != 1 for c in solved):
                raise InvariantViolation("integral basis is not closed under multiplication")
            row.append(tuple(int(c) for c in solved))
        table.append(row)
    return table


@dataclass(frozen=True)
class AlgebraicInteger:
    """An element of O_K as integer coordinates over the field's integral basis."""
    field: NumberField
    coords: Tuple[int, ...]

    def _check(self, other: "AlgebraicInteger"):
        if other.field is not self.field:
            raise InvalidInput("elements belong to different fields")

    def __add__(self, other: "AlgebraicInteger") -> "AlgebraicInteger":
        self._check(other)
        return AlgebraicInteger(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraicInteger") -> "AlgebraicInteger":
        self._check(other)
        return AlgebraicInteger(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraicInteger":
        return AlgebraicInteger(self.field, tuple(-a for a in self.coords))

    def scale(self, n: int) -> "AlgebraicInteger":
        return AlgebraicInteger(self.field, tuple(n * a for a in self.coords))

    def __mul__(self, other: "AlgebraicInteger") -> "AlgebraicInteger":
        self._check(other)
        d = self.field.degree
        table = self.field.mult_table
        out = [0] * d
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                ab = a * b
                for k, c in enumerate(table[i][j]):
                    out[k] += ab * c
        return AlgebraicInteger(self.field, tuple(out))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def mult_matrix(self) -> List[List[int]]:
        """Matrix of x -> self*x; column j holds the coordinates of self*omega_j."""
        d = self.field.degree
        table = self.field.mult_table
        M = [[0] * d for _ in range(d)]
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j in range(d):
                for k, c in enumerate(table[i][j]):
                    M[k][j] += a * c
        return M

    def power_coords(self) -> List[Fraction]:
        """Coefficients of self in the power basis of theta."""
        d = self.field.degree
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coords):
            if a:
                for k, c in enumerate(self.field.basis[i]):
                    out[k] += a * c
        return out


def _element_product_coords(field: NumberField, i: int, j: int) -> AlgebraicInteger:
    return AlgebraicInteger(field, field.mult_table[i][j])


@lru_cache(maxsize=65536)
def char_poly(alpha: AlgebraicInteger) -> IntPolynomial:
    """Characteristic polynomial of multiplication by alpha, monic of degree d."""
    d = alpha.field.degree
    M = DomainMatrix([[ZZ(v) for v in row] for row in alpha.mult_matrix()], (d, d), ZZ)
    return IntPolynomial(tuple(int(c) for c in reversed(M.charpoly())))


def norm(alpha: AlgebraicInteger) -> int:
    f = char_poly(alpha)
    return f.coeffs[0] if f.degree % 2 == 0 else -f.coeffs[0]


def trace(alpha: AlgebraicInteger) -> int:
    return sum(alpha.mult_matrix()[k][k] for k in range(alpha.field.degree))


def is_primitive(alpha: AlgebraicInteger) -> bool:
    """True iff Q(alpha) = K, i.e. the characteristic polynomial is squarefree."""
    if alpha.field.degree == 1:
        return True
    return char_poly(alpha).discriminant() != 0


@dataclass(frozen=True)
class Embedding:
    """Real embeddings followed by one (Re, Im) pair per complex-conjugate pair."""
    real: Tuple[CertifiedReal, ...]
    complex: Tuple[Tuple[CertifiedReal, CertifiedReal], ...]

    def coordinates(self) -> Tuple[CertifiedReal, ...]:
        flat = list(self.real)
        for re, im in self.complex:
            flat.extend((re, im))
        return tuple(flat)

    def squared_moduli(self) -> List[CertifiedReal]:
        out = [cr.mul(x, x) for x in self.real]
        out.extend(cr.add(cr.mul(re, re), cr.mul(im, im)) for re, im in self.complex)
        return out

    def moduli(self) -> List[CertifiedReal]:
        out = [cr.abs_(x) for x in self.real]
        out.extend(cr.sqrt_(sq) for sq in self.squared_moduli()[len(self.real):])
        return out

    def sup_norm(self) -> CertifiedReal:
        best = None
        for sq in self.squared_moduli():
            best = sq if best is None else cr.maximum(best, sq)
        return cr.sqrt_(best)


def _quadratic_embedding(alpha: AlgebraicInteger) -> Embedding:
    D = alpha.field.D
    x, y = alpha.coords
    if D % 4 == 1:
        u, v = Fraction(2 * x + y, 2), Fraction(-y, 2)
    else:
        u, v = Fraction(x), Fraction(-y)
    if D > 0:
        return Embedding((cr._coerce(QuadValue(u, v, D)), cr._coerce(QuadValue(u, -v, D))), ())
    im = v if D == -1 else cr._coerce(QuadValue(0, v, -D))
    return Embedding((), ((u, im),))


def _ball_coordinate(field: NumberField, coeffs: List[Fraction], index: int, part: str) -> CertifiedReal:
    def compute(k: int):
        ball = cr.evaluate_ball(coeffs, field.root_balls(k)[index], k + 8)
        return ball.imag_enclosure() if part == "im" else ball.real_enclosure()
    return cr.IntervalReal.from_function(compute)


def embed(alpha: AlgebraicInteger) -> Embedding:
    """The Minkowski embedding of alpha."""
    field = alpha.field
    if field.is_quadratic:
        return _quadratic_embedding(alpha)
    coeffs = alpha.power_coords()
    if field.degree == 1:
        return Embedding((coeffs[0],), ())
    if all(c == 0 for c in coeffs[1:]):
        value = coeffs[0]
        return Embedding(tuple(value for _ in range(field.r1)),
                         tuple((value, Fraction(0)) for _ in range(field.r2)))
    real = tuple(_ball_coordinate(field, coeffs, j, "re") for j in range(field.r1))
    complex_pairs = tuple((_ball_coordinate(field, coeffs, field.r1 + j, "re"),
                           _ball_coordinate(field, coeffs, field.r1 + j, "im"))
                          for j in range(field.r2))
    return Embedding(real, complex_pairs)


# ---------------------------------------------------------------------------
# Mahler measures and heights

@lru_cache(maxsize=1024)
def _isolated(coeffs: Tuple[int, ...], bits: int) -> List[ComplexBall]:
    return cr.isolate_roots(coeffs, bits)


def _mahler_irreducible(g: IntPolynomial) -> CertifiedReal:
    c = [Fraction(v) for v in g.coeffs]
    if g.degree == 0:
        return abs(c[0])
    if g.degree == 1:
        return max(abs(c[0]), abs(c[1]))
    if g.degree == 2:
        c0, c1, c2 = c
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return max(abs(c2), abs(c0))
        root = cr.sqrt_rational(disc)
        r_plus = cr.div(cr.add(-c1, root), 2 * c2)
        r_minus = cr.div(cr.sub(-c1, root), 2 * c2)
        return cr.mul(abs(c2), cr.mul(cr.maximum(Fraction(1), cr.abs_(r_plus)),
                                      cr.maximum(Fraction(1), cr.abs_(r_minus))))
    coeffs = g.coeffs
    lead = abs(c[-1])

    def compute(k: int):
        lo, hi = lead, lead
        for ball in _isolated(coeffs, k):
            mlo, mhi = ball.modulus_enclosure(k + 4)
            flo, fhi = max(Fraction(1), mlo), max(Fraction(1), mhi)
            mult = 1 if ball.is_real else 2
            lo *= flo ** mult
            hi *= fhi ** mult
        return lo, hi

    return cr.IntervalReal.from_function(compute)


def mahler_measure(f: IntPolynomial) -> CertifiedReal:
    """M(f) = |lc(f)| * prod max(1, |root|), exact for factors of degree at most 2."""
    if f.is_zero:
        raise InvalidInput("Mahler measure of the zero polynomial")
    content, factors = f.to_poly().factor_list()
    result: CertifiedReal = abs(Fraction(int(content)))
    for g, e in factors:
        result = cr.mul(result, cr.power(_mahler_irreducible(IntPolynomial.from_poly(g)), int(e)))
    return result


def height(alpha: AlgebraicInteger) -> CertifiedReal:
    """Absolute multiplicative Weil height of an algebraic integer."""
    d = alpha.field.degree
    return cr.nth_root(mahler_measure(char_poly(alpha)), d)


def vector_height(xi: Sequence[int]) -> Fraction:
    """Weil height of an integer vector, max{1, |xi_i|}."""
    return Fraction(max([1] + [abs(int(v)) for v in xi]))

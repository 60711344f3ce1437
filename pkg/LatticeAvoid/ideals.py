"""
Integral ideals as Z-modules of full rank inside O_K.

An ``IntegralIdeal`` stores the Hermite normal form of its Z-basis in
integral-basis coordinates; for quadratic fields that form is exactly the
canonical basis {a, b + g*delta}, exposed as ``QuadIdeal``. Norms are
always determinants of integer matrices.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Poly, expand, symbols

from .core import certified_reals as cr
from .core.certified_reals import CertifiedReal
from .core.lattice_core import ExactLattice, NormModel, SublatticeCoords, relative_coords
from .core.nf_core import AlgebraicInteger, NumberField, char_poly, embed, mahler_measure, norm
from .utils.exceptions import (
    InvalidInput,
    InvariantViolation,
    NonIntegralForm,
    NotAnIdeal,
    NotContained,
    SingularMatrix,
)

logger = logging.getLogger(__name__)

_fx, _fy = symbols("x y")


class IntegralIdeal:
    """
    A nonzero ideal of the order spanned by the field's integral basis.

    Args:
        field: The ambient number field
        module: Sublattice of O_K (integral-basis coordinates) spanned by the ideal

    Raises:
        NotAnIdeal: If the module is not closed under multiplication by O_K
    """

    def __init__(self, field: NumberField, module: SublatticeCoords):
        if module.d != field.degree:
            raise InvalidInput("ideal basis does not match the field degree")
        self.field = field
        self.module = module.hnf()
        for beta in self.basis_elements():
            for j in range(field.degree):
                omega = field.element([int(i == j) for i in range(field.degree)])
                if not self.module.contains((beta * omega).coords):
                    raise NotAnIdeal(f"Z-module {self.module.matrix} is not closed under multiplication")

    @classmethod
    def from_zbasis(cls, field: NumberField, columns: Sequence[Sequence[int]]) -> "IntegralIdeal":
        try:
            module = SublatticeCoords.from_generators(columns, field.degree)
        except SingularMatrix as e:
            raise NotAnIdeal(f"Z-basis does not have full rank: {e}") from None
        return cls(field, module)

    @classmethod
    def from_generators(cls, field: NumberField, generators: Sequence[Union[AlgebraicInteger, Sequence[int]]]) -> "IntegralIdeal":
        """The ideal generated by the given elements as an O_K-module."""
        elements = [g if isinstance(g, AlgebraicInteger) else field.element(g) for g in generators]
        if not elements or all(e.is_zero for e in elements):
            raise InvalidInput("an ideal needs at least one nonzero generator")
        spanning = []
        for e in elements:
            M = e.mult_matrix()
            spanning.extend(tuple(M[i][j] for i in range(field.degree)) for j in range(field.degree))
        return cls(field, SublatticeCoords.from_generators(spanning, field.degree))

    @classmethod
    def unit(cls, field: NumberField) -> "IntegralIdeal":
        return cls.from_generators(field, [field.one()])

    @classmethod
    def principal(cls, field: NumberField, generator: Union[AlgebraicInteger, Sequence[int]]) -> "IntegralIdeal":
        return cls.from_generators(field, [generator])

    def basis_elements(self) -> List[AlgebraicInteger]:
        return [self.field.element(col) for col in self.module.matrix]

    @property
    def norm(self) -> int:
        return self.module.index

    def contains(self, alpha: Union[AlgebraicInteger, Sequence[int]]) -> bool:
        coords = alpha.coords if isinstance(alpha, AlgebraicInteger) else alpha
        return self.module.contains(coords)

    def is_subset_of(self, other: "IntegralIdeal") -> bool:
        return all(other.contains(col) for col in self.module.matrix)

    def __mul__(self, other: "IntegralIdeal") -> "IntegralIdeal":
        return ideal_product(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntegralIdeal) and other.field is self.field
                and other.module.matrix == self.module.matrix)

    def __hash__(self):
        return hash((id(self.field), self.module.matrix))

    def descriptor(self) -> dict:
        if self.field.is_quadratic:
            q = QuadIdeal.from_ideal(self)
            return {"quad": {"D": q.D, "a": q.a, "b": q.b, "g": q.g}}
        return {"zbasis": [list(col) for col in self.module.matrix]}

    def __repr__(self):
        return f"IntegralIdeal({self.field!r}, {self.module.matrix})"


@dataclass(frozen=True)
class QuadIdeal:
    """Canonical basis {a, b + g*delta} of an ideal of Q(sqrt(D))."""
    D: int
    a: int
    b: int
    g: int

    def __post_init__(self):
        if self.a <= 0 or self.g <= 0 or self.b < 0:
            raise InvariantViolation(f"canonical basis needs a, g > 0 and b >= 0, got {self}")
        if self.b >= self.a:
            raise InvariantViolation(f"canonical basis needs b < a, got {self}")
        if self.a % self.g or self.b % self.g:
            raise InvariantViolation(f"g must divide a and b, got {self}")

    @classmethod
    def from_ideal(cls, ideal: IntegralIdeal) -> "QuadIdeal":
        if not ideal.field.is_quadratic:
            raise InvalidInput("canonical bases exist only for quadratic fields")
        (a, zero), (b, g) = ideal.module.matrix
        if zero != 0:
            raise InvariantViolation(f"HNF {ideal.module.matrix} is not upper triangular")
        return cls(ideal.field.D, a, b % a, g)

    @cached_property
    def field(self) -> NumberField:
        return _quadratic_field(self.D)

    @cached_property
    def ideal(self) -> IntegralIdeal:
        return IntegralIdeal.from_zbasis(self.field, [(self.a, 0), (self.b, self.g)])

    @property
    def first(self) -> AlgebraicInteger:
        return self.field.element((self.a, 0))

    @property
    def second(self) -> AlgebraicInteger:
        """The canonical generator b + g*delta."""
        return self.field.element((self.b, self.g))

    def element(self, x: int, y: int) -> AlgebraicInteger:
        return self.field.element((x * self.a + y * self.b, y * self.g))

    @property
    def norm(self) -> int:
        return self.ideal.norm

    @property
    def closed_form_norm(self) -> Fraction:
        """ag, or ag/2 when D = 1 mod 4."""
        value = Fraction(self.a * self.g)
        return value / 2 if self.D % 4 == 1 else value

    @property
    def closed_form_mismatch(self) -> bool:
        return self.closed_form_norm != self.norm

    def descriptor(self) -> dict:
        return {"quad": {"D": self.D, "a": self.a, "b": self.b, "g": self.g}}

    def __str__(self):
        return f"({self.a}, {self.b}, {self.g}) in Q(sqrt({self.D}))"


_FIELDS = {}


def _quadratic_field(D: int) -> NumberField:
    """Quadratic fields are shared so that elements of equal ideals compare equal."""
    if D not in _FIELDS:
        _FIELDS[D] = NumberField.quadratic(D)
    return _FIELDS[D]


def quadratic_field(D: int) -> NumberField:
    return _quadratic_field(int(D))


def quad_canonical(D: int, a: Optional[int] = None, b: Optional[int] = None, g: Optional[int] = None,
                   zbasis: Optional[Sequence[Sequence[int]]] = None) -> QuadIdeal:
    """
    Canonical basis from raw (a, b, g) or from a Z-basis in {1, delta} coordinates.

    Raises:
        NotAnIdeal: If the Z-module is not closed under multiplication
        InvariantViolation: If the canonical invariants fail
    """
    field = _quadratic_field(int(D))
    if zbasis is None:
        if a is None or b is None or g is None:
            raise InvalidInput("quad_canonical needs either (a, b, g) or a Z-basis")
        zbasis = [(a, 0), (b, g)]
    q = QuadIdeal.from_ideal(IntegralIdeal.from_zbasis(field, zbasis))
    if norm(q.second) % (q.a * q.g):
        raise InvariantViolation(f"ag = {q.a * q.g} does not divide N(b + g*delta) = {norm(q.second)}")
    return q


AnyIdeal = Union[IntegralIdeal, QuadIdeal]


def _as_integral(ideal: AnyIdeal) -> IntegralIdeal:
    return ideal.ideal if isinstance(ideal, QuadIdeal) else ideal


def ideal_norm(ideal: AnyIdeal) -> int:
    """|O_K / I| as the index of the ideal's HNF basis."""
    q = ideal if isinstance(ideal, QuadIdeal) else None
    value = _as_integral(ideal).norm
    if q is not None and q.closed_form_mismatch:
        logger.debug(f"Closed-form norm {q.closed_form_norm} of {q} differs from the index {value}")
    return value


def ideal_product(first: AnyIdeal, second: AnyIdeal) -> AnyIdeal:
    """
    Z-span of pairwise basis products, HNF-reduced.

    Raises:
        InvalidInput: If the ideals live in different fields
        InvariantViolation: If norms fail to multiply where they must
    """
    I, J = _as_integral(first), _as_integral(second)
    if I.field is not J.field:
        raise InvalidInput("ideal product across different fields")
    products = [(x * y).coords for x in I.basis_elements() for y in J.basis_elements()]
    result = IntegralIdeal(I.field, SublatticeCoords.from_generators(products, I.field.degree))
    if (I.field.is_maximal or gcd(I.norm, J.norm) == 1) and result.norm != I.norm * J.norm:
        raise InvariantViolation(f"N(IJ) = {result.norm} differs from N(I)N(J) = {I.norm * J.norm}")
    if isinstance(first, QuadIdeal) and isinstance(second, QuadIdeal):
        return QuadIdeal.from_ideal(result)
    return result


def _norm_model(field: NumberField) -> NormModel:
    return NormModel(field.r1, field.r2)


def ideal_lattice(ideal: AnyIdeal) -> ExactLattice:
    """
    Minkowski embedding of the ideal.

    Raises:
        InvariantViolation: If det(lattice) differs from N(I) * sqrt(|disc|)
    """
    I = _as_integral(ideal)
    columns = [embed(beta).coordinates() for beta in I.basis_elements()]
    lattice = ExactLattice(columns, _norm_model(I.field))
    expected = cr.mul(Fraction(I.norm), cr.sqrt_rational(abs(I.field.basis_discriminant)))
    if not cr.consistent(lattice.determinant, expected):
        raise InvariantViolation(
            f"det of the ideal lattice {cr.to_decimal(lattice.determinant, 12)} differs from "
            f"N(I)*sqrt|disc| = {cr.to_decimal(expected, 12)}")
    return lattice


def ideal_sublattice(parent: AnyIdeal, child: AnyIdeal) -> SublatticeCoords:
    """
    Coordinates of child's basis in parent's basis.

    Raises:
        NotContained: If child is not contained in parent
    """
    I, J = _as_integral(parent), _as_integral(child)
    if I.field is not J.field:
        raise InvalidInput("ideals live in different fields")
    if not J.is_subset_of(I):
        raise NotContained(f"{J!r} is not contained in {I!r}")
    sub = relative_coords(I.module, J.module)
    if sub.index * I.norm != J.norm:
        raise InvariantViolation(f"relative index {sub.index} disagrees with N(J)/N(I)")
    return sub


@dataclass(frozen=True)
class NormForm:
    """f(x, y) = A x^2 + B xy + C y^2."""
    A: int
    B: int
    C: int

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def height(self) -> int:
        """max{1, |A|, |B|, |C|}."""
        return max(1, abs(self.A), abs(self.B), abs(self.C))

    def __str__(self):
        return f"{self.A}x^2 + {self.B}xy + {self.C}y^2"


def norm_form(q: QuadIdeal) -> Tuple[NormForm, int]:
    """
    The form N(x*a + y*(b + g*delta)) / N(I) and its height H.

    The norm is the determinant of the multiplication matrix of the generic
    element, expanded symbolically.

    Raises:
        NonIntegralForm: If a coefficient is not an integer
    """
    Ma = q.first.mult_matrix()
    Mb = q.second.mult_matrix()
    generic = Matrix(2, 2, lambda i, j: _fx * Ma[i][j] + _fy * Mb[i][j])
    numerator = Poly(expand(generic.det()), _fx, _fy)
    N = ideal_norm(q)
    coeffs = [Fraction(int(numerator.coeff_monomial(m)), N) for m in (_fx ** 2, _fx * _fy, _fy ** 2)]
    if any(c.denominator != 1 for c in coeffs):
        raise NonIntegralForm(f"norm form of {q} has non-integral coefficients {coeffs}")
    form = NormForm(*(int(c) for c in coeffs))
    return form, form.height


def closed_form_height(q: QuadIdeal) -> Fraction:
    """The printed closed-form height of the norm form, without the max with 1."""
    a, b, g, D = q.a, q.b, q.g, q.D
    if D % 4 == 1:
        return max(Fraction(2 * a, g), Fraction(2 * abs(2 * b + g), g),
                   Fraction(abs(4 * b * b + 4 * b - D * g + g), 2 * a * g))
    return max(Fraction(a, g), Fraction(2 * b, g), Fraction(abs(b * b - D), a * g))


def canonical_ideals(D: int, a_max: int, g_values: Optional[Sequence[int]] = None):
    """All canonical (a, b, g) of Q(sqrt(D)) with a <= a_max, in ascending (a, b, g) order."""
    field = _quadratic_field(D)
    out = []
    for a in range(1, a_max + 1):
        for b in range(a):
            for g in (g_values or range(1, a + 1)):
                if a % g or b % g:
                    continue
                try:
                    q = QuadIdeal(D, a, b, g)
                    if norm(field.element((b, g))) % (a * g):
                        continue
                    q.ideal
                except (NotAnIdeal, InvariantViolation):
                    continue
                out.append(q)
    return out


def height_scaling_holds(alpha: AlgebraicInteger, g: int) -> bool:
    """h(g*alpha) <= g * h(alpha), compared through Mahler measures."""
    d = alpha.field.degree
    lhs = mahler_measure(char_poly(alpha.scale(g)))
    rhs = cr.mul(Fraction(g) ** d, mahler_measure(char_poly(alpha)))
    return cr.less_equal(lhs, rhs)


def ideal_det_consistent(ideal: AnyIdeal, lattice: Optional[ExactLattice] = None) -> bool:
    I = _as_integral(ideal)
    lattice = lattice or ideal_lattice(I)
    expected: CertifiedReal = cr.mul(Fraction(I.norm), cr.sqrt_rational(abs(I.field.discriminant)))
    return cr.consistent(lattice.determinant, expected)

"""
Full-rank lattices with certified geometry.

``ExactLattice`` is a lattice in R^d given by d basis columns of certified
reals, measured in a sup-norm that may pair consecutive coordinates
(Re, Im) into complex moduli. ``SublatticeCoords`` describes a full-rank
sublattice by an integer matrix in parent coordinates.

Enumeration is exhaustive inside a certified coefficient box: every point
of norm at most T has coordinates bounded by T times the row sums of
B^-1, and those row sums are bounded from a rational approximation of B
together with its perturbation radius. Candidates are sorted by norm, then
by the sum of absolute parent coordinates, then by descending
lexicographic order of parent coordinates.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from ..config import Var
from ..utils.exceptions import (
    EnumerationBudgetExceeded,
    InvalidInput,
    InvariantViolation,
    NoPositiveAnchor,
    NotContained,
    NotTotallyReal,
    PrecisionExhausted,
    SingularMatrix,
)
from ..utils.smart_logger import SmartRateLimitedLogger
from . import certified_reals as cr
from .certified_reals import CertifiedReal, IntervalReal, Ordering, QuadValue

logger = logging.getLogger(__name__)
progress = SmartRateLimitedLogger(logger, rate_limit_seconds=5)


@dataclass(frozen=True)
class NormModel:
    """Sup-norm over `real` real coordinates followed by `complex_pairs` (Re, Im) pairs."""
    real: int
    complex_pairs: int = 0

    @property
    def dimension(self) -> int:
        return self.real + 2 * self.complex_pairs

    @property
    def det_factor(self) -> int:
        return 2 ** self.complex_pairs

    def unit_ball_volume(self) -> CertifiedReal:
        """Volume of the unit ball, 2^r1 * pi^r2."""
        base = Fraction(2 ** self.real)
        if self.complex_pairs == 0:
            return base
        return cr.mul(base, cr.power(cr.pi_value(), self.complex_pairs))

    def squared_norm(self, coords: Sequence[CertifiedReal]) -> CertifiedReal:
        parts = [cr.mul(x, x) for x in coords[:self.real]]
        for j in range(self.complex_pairs):
            re, im = coords[self.real + 2 * j], coords[self.real + 2 * j + 1]
            parts.append(cr.add(cr.mul(re, re), cr.mul(im, im)))
        best = parts[0]
        for p in parts[1:]:
            if _compare(p, best) == Ordering.GREATER:
                best = p
        return best

    def norm(self, coords: Sequence[CertifiedReal]) -> CertifiedReal:
        return cr.sqrt_(self.squared_norm(coords))


def _compare(a, b) -> Ordering:
    """Ordering used inside enumerations; interval ties are resolved at the tie precision."""
    return cr.compare(a, b, tie_bits=Var.TIE_PRECISION)


def _is_exact_family(values: Sequence[CertifiedReal]) -> bool:
    radicand = None
    for v in values:
        v = cr._coerce(v)
        if isinstance(v, IntervalReal):
            return False
        if isinstance(v, QuadValue):
            if radicand is not None and radicand != v.D:
                return False
            radicand = v.D
    return True


def linear_combination(entries: Sequence[CertifiedReal], coeffs: Sequence[int]) -> CertifiedReal:
    """sum(coeffs[j] * entries[j]), exact when the entries share a radicand."""
    if _is_exact_family(entries):
        total: CertifiedReal = Fraction(0)
        for e, c in zip(entries, coeffs):
            if c:
                total = cr.add(total, cr.mul(Fraction(c), e))
        return total
    weight = sum(abs(int(c)) for c in coeffs).bit_length() + 1
    terms = [(int(c), e) for c, e in zip(coeffs, entries) if c]

    def compute(k: int):
        lo, hi = Fraction(0), Fraction(0)
        for c, e in terms:
            elo, ehi = cr.enclosure(e, k + weight)
            if c > 0:
                lo, hi = lo + c * elo, hi + c * ehi
            else:
                lo, hi = lo + c * ehi, hi + c * elo
        return lo, hi

    if not terms:
        return Fraction(0)
    return IntervalReal.from_function(compute)


def certified_det(rows: Sequence[Sequence[CertifiedReal]]) -> CertifiedReal:
    """Determinant by Gaussian elimination with certified-nonzero pivots."""
    n = len(rows)
    M = [[cr._coerce(v) for v in row] for row in rows]
    det: CertifiedReal = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if cr.certified_nonzero(M[r][col])), None)
        if pivot is None:
            if _is_exact_family([M[r][col] for r in range(col, n)]):
                return Fraction(0)
            raise SingularMatrix("no certified nonzero pivot")
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = cr.neg(det)
        det = cr.mul(det, M[col][col])
        for r in range(col + 1, n):
            if not cr.certified_nonzero(M[r][col]):
                continue
            factor = cr.div(M[r][col], M[col][col])
            for c in range(col, n):
                M[r][c] = cr.sub(M[r][c], cr.mul(factor, M[col][c]))
    return det


def _fraction_inverse(A: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(A)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        M[col], M[pivot] = M[pivot], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


class _Echelon:
    """Incremental exact rank test for integer vectors."""

    def __init__(self):
        self.rows: List[Tuple[int, List[Fraction]]] = []

    def reduce(self, v: Sequence[int]) -> List[Fraction]:
        w = [Fraction(x) for x in v]
        for pivot, row in self.rows:
            if w[pivot] != 0:
                f = w[pivot] / row[pivot]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        pivot = next((i for i, x in enumerate(w) if x != 0), None)
        if pivot is None:
            return False
        self.rows.append((pivot, w))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def are_independent(vectors: Sequence[Sequence[int]]) -> bool:
    ech = _Echelon()
    return all(ech.add(v) for v in vectors)


@dataclass(frozen=True)
class LatticePoint:
    coords: Tuple[int, ...]
    ambient: Tuple[CertifiedReal, ...]
    squared_norm: CertifiedReal

    @property
    def norm(self) -> CertifiedReal:
        return cr.sqrt_(self.squared_norm)


def _point_order(a: LatticePoint, b: LatticePoint) -> int:
    order = _compare(a.squared_norm, b.squared_norm)
    if order != Ordering.EQUAL:
        return int(order)
    weight_a, weight_b = sum(map(abs, a.coords)), sum(map(abs, b.coords))
    if weight_a != weight_b:
        return -1 if weight_a < weight_b else 1
    if a.coords == b.coords:
        return 0
    return -1 if a.coords > b.coords else 1


def sort_points(points: Sequence[LatticePoint]) -> List[LatticePoint]:
    return sorted(points, key=cmp_to_key(_point_order))


def _sign_normalized(coords: Sequence[int]) -> bool:
    for c in coords:
        if c:
            return c > 0
    return False


class ExactLattice:
    """
    A full-rank lattice given by basis columns of certified reals.

    Args:
        columns: d basis vectors, each a sequence of d ambient coordinates
        norm_model: how coordinates combine into the sup-norm

    Raises:
        SingularMatrix: If the columns are linearly dependent
        InvalidInput: If the dimension is outside 1..MAX_DIMENSION
    """

    def __init__(self, columns: Sequence[Sequence], norm_model: Optional[NormModel] = None):
        d = len(columns)
        if d < 1 or d > Var.MAX_DIMENSION:
            raise InvalidInput(f"lattice dimension must be between 1 and {Var.MAX_DIMENSION}, got {d}")
        if any(len(col) != d for col in columns):
            raise InvalidInput("lattice basis must be square")
        self.columns = [tuple(cr._coerce(v) for v in col) for col in columns]
        self.d = d
        self.norm_model = norm_model or NormModel(d)
        if self.norm_model.dimension != d:
            raise InvalidInput("norm model dimension does not match the lattice")
        if not cr.certified_nonzero(self.coordinate_det):
            raise SingularMatrix("lattice basis is singular")

    @classmethod
    def from_integer_columns(cls, columns: Sequence[Sequence[int]]) -> "ExactLattice":
        return cls([[Fraction(int(v)) for v in col] for col in columns])

    @property
    def rows(self) -> List[List[CertifiedReal]]:
        return [[self.columns[j][i] for j in range(self.d)] for i in range(self.d)]

    @cached_property
    def coordinate_det(self) -> CertifiedReal:
        if all(isinstance(v, Fraction) for col in self.columns for v in col):
            det = Matrix(self.rows).det()
            return Fraction(int(det.p), int(det.q))
        return certified_det(self.rows)

    @cached_property
    def determinant(self) -> CertifiedReal:
        """Covolume |det B| scaled by 2^r2 for complex pairs."""
        return cr.mul(cr.abs_(self.coordinate_det), Fraction(self.norm_model.det_factor))

    @property
    def is_exact(self) -> bool:
        return _is_exact_family([v for col in self.columns for v in col])

    def point(self, coords: Sequence[int]) -> Tuple[CertifiedReal, ...]:
        return tuple(linear_combination([col[i] for col in self.columns], coords) for i in range(self.d))

    def lattice_point(self, coords: Sequence[int]) -> LatticePoint:
        ambient = self.point(coords)
        return LatticePoint(tuple(int(c) for c in coords), ambient, self.norm_model.squared_norm(ambient))

    def norm_of(self, coords: Sequence[int]) -> CertifiedReal:
        return self.norm_model.norm(self.point(coords))

    def sublattice(self, sub: "SublatticeCoords") -> "ExactLattice":
        if sub.d != self.d:
            raise InvalidInput("sublattice dimension does not match the lattice")
        return ExactLattice([self.point(col) for col in sub.matrix], self.norm_model)

    # -- enumeration support -------------------------------------------------

    @cached_property
    def _lll_transform(self) -> List[List[int]]:
        approx = [[_midpoint(v, 64) for v in col] for col in self.columns]
        return lll_transform(approx)

    def _row_bounds(self, U: List[List[int]]) -> List[Fraction]:
        """Per-coordinate bounds r_i with |c_i| <= T * r_i for points of norm at most T."""
        bits = 64
        while True:
            mids, eps = [], Fraction(0)
            for row_u in U:
                col_lo, col_hi = [], []
                for i in range(self.d):
                    lo = hi = Fraction(0)
                    for c, col in zip(row_u, self.columns):
                        if c:
                            elo, ehi = cr.enclosure(col[i], bits)
                            lo, hi = (lo + c * elo, hi + c * ehi) if c > 0 else (lo + c * ehi, hi + c * elo)
                    col_lo.append(lo)
                    col_hi.append(hi)
                mids.append([(a + b) / 2 for a, b in zip(col_lo, col_hi)])
                eps = max([eps] + [(b - a) / 2 for a, b in zip(col_lo, col_hi)])
            A = [[mids[j][i] for j in range(self.d)] for i in range(self.d)]
            inv = _fraction_inverse(A)
            row_sums = [sum(abs(v) for v in row) for row in inv]
            inv_norm = max(row_sums)
            rho = inv_norm * self.d * eps
            if rho <= Fraction(1, 2):
                slack = inv_norm * rho / (1 - rho)
                return [s + slack for s in row_sums]
            if bits > Var.PRECISION_CAP + 256:
                raise SingularMatrix("basis too ill-conditioned to bound its inverse")
            bits *= 2

    def points_within(self, radius_sq: CertifiedReal, *, sign_normalize: bool = True,
                      keep: Optional[Callable[[LatticePoint], bool]] = None) -> List[LatticePoint]:
        """
        All nonzero lattice points of squared norm at most radius_sq, sorted.

        Args:
            radius_sq: Squared sup-norm radius
            sign_normalize: Keep only points whose first nonzero parent
                coordinate is positive
            keep: Optional extra filter applied after the norm test

        Raises:
            EnumerationBudgetExceeded: If the coefficient box is too large
        """
        U = self._lll_transform
        bounds = self._row_bounds(U)
        radius = cr._sqrt_ceil(cr.enclosure(radius_sq, 20)[1], 20)
        box = [int(radius * b) for b in bounds]
        total = 1
        for r in box:
            total *= 2 * r + 1
        if total > Var.ENUMERATION_BUDGET:
            raise EnumerationBudgetExceeded(
                f"enumeration box of {total} points exceeds budget {Var.ENUMERATION_BUDGET}")
        logger.debug(f"Enumerating {total} candidates in box {box}")

        found = []
        for count, reduced in enumerate(itertools.product(*[range(-r, r + 1) for r in box])):
            if count % 4096 == 0 and count:
                progress.log("info", f"Enumerated {count}/{total} candidates", key=("enumerate", id(self)))
            if not any(reduced):
                continue
            coords = tuple(sum(reduced[i] * U[i][j] for i in range(self.d)) for j in range(self.d))
            if sign_normalize and not _sign_normalized(coords):
                continue
            pt = self.lattice_point(coords)
            if _compare(pt.squared_norm, radius_sq) == Ordering.GREATER:
                continue
            if keep is not None and not keep(pt):
                continue
            found.append(pt)
        return sort_points(found)

    def descriptor(self) -> List[List[dict]]:
        return [[cr.exact_form(v) for v in col] for col in self.columns]


def _midpoint(v: CertifiedReal, bits: int) -> Fraction:
    lo, hi = cr.enclosure(v, bits)
    return (lo + hi) / 2


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _gram_schmidt(basis: Sequence[Sequence[Fraction]]):
    ortho: List[List[Fraction]] = []
    mu = [[Fraction(0)] * len(basis) for _ in basis]
    for i, vec in enumerate(basis):
        w = list(vec)
        for k in range(i):
            denom = _dot(ortho[k], ortho[k])
            mu[i][k] = _dot(vec, ortho[k]) / denom if denom else Fraction(0)
            w = [a - mu[i][k] * b for a, b in zip(w, ortho[k])]
        ortho.append(w)
    return ortho, mu


def lll_transform(vectors: Sequence[Sequence[Fraction]], delta: Fraction = Fraction(3, 4),
                  max_rounds: int = 10_000) -> List[List[int]]:
    """
    LLL-reduce rational vectors, returning the unimodular transform.

    Row i of the result holds the integer coefficients of reduced vector i
    in terms of the input vectors.
    """
    b = [list(v) for v in vectors]
    n = len(b)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    k, rounds = 1, 0
    while k < n and rounds < max_rounds:
        rounds += 1
        ortho, mu = _gram_schmidt(b)
        for j in reversed(range(k)):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                U[k] = [x - q * y for x, y in zip(U[k], U[j])]
                ortho, mu = _gram_schmidt(b)
        if _dot(ortho[k], ortho[k]) >= (delta - mu[k][k - 1] ** 2) * _dot(ortho[k - 1], ortho[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            k = max(k - 1, 1)
    return U


# ---------------------------------------------------------------------------
# Integer sublattices

def _adjugate(columns: Sequence[Sequence[int]]) -> Tuple[List[List[int]], int]:
    d = len(columns)
    M = Matrix([[columns[j][i] for j in range(d)] for i in range(d)])
    det = int(M.det())
    adj = M.adjugate()
    return [[int(adj[i, j]) for j in range(d)] for i in range(d)], det


def _hnf(columns: Sequence[Sequence[int]], d: int) -> List[Tuple[int, ...]]:
    A = DomainMatrix([[ZZ(int(col[i])) for col in columns] for i in range(d)], (d, len(columns)), ZZ)
    H = hermite_normal_form(A).to_Matrix()
    if H.shape[1] != d:
        raise SingularMatrix(f"generators span a lattice of rank {H.shape[1]} < {d}")
    return [tuple(int(H[i, j]) for i in range(d)) for j in range(d)]


@dataclass(frozen=True)
class SublatticeCoords:
    """Integer matrix whose columns are a sublattice basis in parent coordinates."""
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        matrix = tuple(tuple(int(v) for v in col) for col in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        d = len(matrix)
        if d < 1 or any(len(col) != d for col in matrix):
            raise InvalidInput("sublattice matrix must be square")
        if self._adj_det[1] == 0:
            raise SingularMatrix("sublattice matrix is singular")

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]], d: int) -> "SublatticeCoords":
        return cls(tuple(_hnf(generators, d)))

    @property
    def d(self) -> int:
        return len(self.matrix)

    @cached_property
    def _adj_det(self) -> Tuple[List[List[int]], int]:
        return _adjugate(self.matrix)

    @property
    def index(self) -> int:
        return abs(self._adj_det[1])

    def contains(self, point: Sequence[int]) -> bool:
        adj, det = self._adj_det
        return all(sum(a * int(p) for a, p in zip(row, point)) % det == 0 for row in adj)

    def coordinates_of(self, point: Sequence[int]) -> Tuple[int, ...]:
        adj, det = self._adj_det
        out = []
        for row in adj:
            num = sum(a * int(p) for a, p in zip(row, point))
            if num % det:
                raise NotContained(f"{tuple(point)} is not in the sublattice")
            out.append(num // det)
        return tuple(out)

    def hnf(self) -> "SublatticeCoords":
        return SublatticeCoords(tuple(_hnf(self.matrix, self.d)))

    def compose(self, child: "SublatticeCoords") -> "SublatticeCoords":
        """Express child (given in this sublattice's coordinates) in parent coordinates."""
        cols = [tuple(sum(self.matrix[k][i] * col[k] for k in range(self.d)) for i in range(self.d))
                for col in child.matrix]
        return SublatticeCoords(tuple(cols))


def index_and_det(parent: ExactLattice, sub: SublatticeCoords) -> Tuple[int, CertifiedReal]:
    """[parent : sub] = |det M| and det(sub) = index * det(parent)."""
    if sub.d != parent.d:
        raise InvalidInput("sublattice dimension does not match the lattice")
    return sub.index, cr.mul(Fraction(sub.index), parent.determinant)


def relative_coords(parent: SublatticeCoords, child: SublatticeCoords) -> SublatticeCoords:
    """Coordinates of child's basis in parent's basis, both given in a common ambient lattice."""
    try:
        return SublatticeCoords(tuple(parent.coordinates_of(col) for col in child.matrix))
    except NotContained as e:
        raise NotContained(f"sublattice is not contained in its parent: {e}") from None


def _lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def intersect(subs: Sequence[SublatticeCoords]) -> SublatticeCoords:
    """
    Intersection of full-rank sublattices, in Hermite normal form.

    The dual of an intersection is the sum of the duals, so the HNF of the
    stacked scaled dual bases is dualised back.
    """
    if not subs:
        raise InvalidInput("intersection of an empty family")
    d = subs[0].d
    if any(s.d != d for s in subs):
        raise InvalidInput("sublattices live in different dimensions")
    if len(subs) == 1:
        return subs[0].hnf()
    N = _lcm([s.index for s in subs])
    generators = []
    for s in subs:
        adj, det = s._adj_det
        scale = N // det
        # Columns of N*M^-T are the scaled rows of adj(M)/det.
        generators.extend(tuple(scale * adj[i][j] for j in range(d)) for i in range(d))
    H = _hnf(generators, d)
    adj_h, det_h = _adjugate(H)
    cols = []
    for i in range(d):
        col = []
        for j in range(d):
            num = N * adj_h[i][j]
            if num % det_h:
                raise InvariantViolation("dual of the dual sum is not integral")
            col.append(num // det_h)
        cols.append(tuple(col))
    result = SublatticeCoords(tuple(cols)).hnf()
    product = 1
    for s in subs:
        product *= s.index
    for s in subs:
        if not all(s.contains(col) for col in result.matrix):
            raise InvariantViolation("intersection basis escapes a sublattice")
    if product % result.index or result.index < max(s.index for s in subs):
        raise InvariantViolation(f"intersection index {result.index} is inconsistent")
    return result


# ---------------------------------------------------------------------------
# Successive minima, covering radius, positive minima

@dataclass(frozen=True)
class MinimaResult:
    values: Tuple[CertifiedReal, ...]
    vectors: Tuple[Tuple[int, ...], ...]
    tie_bits: Optional[int]


def _minkowski_check(L: ExactLattice, values: Sequence[CertifiedReal]):
    lhs = cr.product(values)
    rhs = cr.div(cr.mul(Fraction(2 ** L.d), L.determinant), L.norm_model.unit_ball_volume())
    if _compare(lhs, rhs) == Ordering.GREATER:
        raise InvariantViolation("product of successive minima exceeds Minkowski's bound")


def successive_minima(L: ExactLattice) -> MinimaResult:
    """
    Successive minima lambda_1..lambda_d in the sup-norm with realising vectors.

    Ties are broken by the smaller coefficient sum, then by descending
    lexicographic order of the sign-normalised parent coordinates. For interval-valued lattices, norms agreeing to
    2^-TIE_PRECISION count as ties.
    """
    U = L._lll_transform
    longest = None
    for row in U:
        sq = L.lattice_point(row).squared_norm
        longest = sq if longest is None else cr.maximum(longest, sq)
    points = L.points_within(longest)
    ech = _Echelon()
    values, vectors = [], []
    for pt in points:
        if ech.add(pt.coords):
            values.append(pt.norm)
            vectors.append(pt.coords)
            if ech.rank == L.d:
                break
    if ech.rank != L.d:
        raise InvariantViolation("enumeration did not reach full rank")
    _minkowski_check(L, values)
    logger.debug(f"Successive minima: {[cr.to_decimal(v, 12) for v in values]}")
    return MinimaResult(tuple(values), tuple(vectors), None if L.is_exact else Var.TIE_PRECISION)


def covering_radius_upper(L: ExactLattice) -> CertifiedReal:
    """Euclidean covering radius bound 1/2 * sqrt(sum |b_i*|^2) on the LLL-reduced basis."""
    reduced = [L.point(row) for row in L._lll_transform]
    gram = [[cr.sum_(cr.mul(a, b) for a, b in zip(u, v)) for v in reduced] for u in reduced]
    total: CertifiedReal = Fraction(0)
    previous: CertifiedReal = Fraction(1)
    for i in range(1, L.d + 1):
        current = certified_det([row[:i] for row in gram[:i]])
        total = cr.add(total, cr.div(current, previous))
        previous = current
    return cr.mul(Fraction(1, 2), cr.sqrt_(total))


@dataclass(frozen=True)
class PositiveMinima:
    values: Tuple[CertifiedReal, ...]
    vectors: Tuple[Tuple[int, ...], ...]
    anchor: Tuple[int, ...]
    anchor_norm: CertifiedReal
    covering_radius: CertifiedReal
    minima: MinimaResult


def _all_at_least(values: Sequence[CertifiedReal], bound: Fraction) -> bool:
    """Certified coordinate-wise v >= bound; an unresolved comparison counts as below."""
    try:
        return all(cr.compare(v, bound) != Ordering.LESS for v in values)
    except PrecisionExhausted:
        return False


def positive_minima(L: ExactLattice) -> PositiveMinima:
    """
    Minima restricted to the closed positive orthant, plus an anchor point
    whose coordinates are all at least 1.

    Raises:
        NotTotallyReal: If the norm model pairs complex coordinates
        NoPositiveAnchor: If the search radius holds no anchor or too few
            independent positive points
    """
    if L.norm_model.complex_pairs:
        raise NotTotallyReal("positive minima need a lattice in R^d")
    mu = covering_radius_upper(L)
    minima = successive_minima(L)
    anchor_radius = cr.add(cr.mul(Fraction(2), mu), Fraction(1))
    restricted_radius = cr.mul(cr.mul(Fraction(2), minima.values[-1]), cr.add(mu, Fraction(1)))
    radius = cr.maximum(anchor_radius, restricted_radius)
    points = L.points_within(cr.mul(radius, radius), sign_normalize=False,
                             keep=lambda pt: _all_at_least(pt.ambient, Fraction(0)))
    ech = _Echelon()
    values, vectors = [], []
    anchor = None
    for pt in points:
        if anchor is None and _all_at_least(pt.ambient, Fraction(1)):
            anchor = pt
        if ech.rank < L.d and ech.add(pt.coords):
            values.append(pt.norm)
            vectors.append(pt.coords)
        if anchor is not None and ech.rank == L.d:
            break
    if anchor is None:
        raise NoPositiveAnchor(f"no point with all coordinates >= 1 within radius {cr.to_decimal(radius, 12)}")
    if ech.rank != L.d:
        raise NoPositiveAnchor("positive orthant points do not span the lattice within the search radius")
    return PositiveMinima(tuple(values), tuple(vectors), anchor.coords, anchor.norm, mu, minima)

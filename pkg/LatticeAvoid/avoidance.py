"""
Points of a lattice outside a union of sublattices at which a polynomial
does not vanish.

The pipeline finds a short witness x outside every sublattice, picks d-1
successive-minima vectors of the intersection lattice independent of x,
and walks a coefficient grid whose first coordinate is 1 mod D until the
polynomial is nonzero. The positive variant first shifts the witness into
the closed positive orthant along an anchor point with coordinates >= 1.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, Iterator, List, Optional, Protocol, Sequence, Tuple

from .bounds import (
    BoundName,
    anchor_bound,
    avoidance_bound,
    ceiling,
    construction_bound,
    cube_volume,
    henk_thiel_bound,
    minkowski_last_minimum,
    positive_avoidance_bound,
    restricted_minimum_bound,
    shifted_vector_bound,
    shifted_witness_bound,
)
from .config import Var
from .core import certified_reals as cr
from .core.certified_reals import CertifiedReal, Ordering
from .core.lattice_core import (
    ExactLattice,
    LatticePoint,
    MinimaResult,
    PositiveMinima,
    SublatticeCoords,
    are_independent,
    intersect,
    positive_minima,
    successive_minima,
)
from .core.nf_core import AlgebraicInteger, NumberField, char_poly, is_primitive
from .utils.exceptions import (
    EnumerationBudgetExceeded,
    InvalidInput,
    NotContained,
    NotTotallyReal,
    NullstellensatzFailure,
    PrecisionExhausted,
    SearchExhausted,
)
from .utils.smart_logger import SmartRateLimitedLogger

logger = logging.getLogger(__name__)
progress = SmartRateLimitedLogger(logger, rate_limit_seconds=5)


# ---------------------------------------------------------------------------
# Predicates

class Predicate(Protocol):
    """Something that vanishes on a hypersurface of degree `degree`."""
    degree: int

    def nonzero(self, coords: Tuple[int, ...], ambient: Tuple[CertifiedReal, ...]) -> bool:
        ...

    def describe(self) -> dict:
        ...


@dataclass(frozen=True)
class SparsePolynomial:
    """Integer polynomial in d variables as (exponents, coefficient) terms."""
    variables: int
    terms: Tuple[Tuple[Tuple[int, ...], int], ...]

    def __post_init__(self):
        merged: Dict[Tuple[int, ...], int] = {}
        for exps, coeff in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.variables or any(e < 0 for e in exps):
                raise InvalidInput(f"term exponents {exps} do not fit {self.variables} variables")
            merged[exps] = merged.get(exps, 0) + int(coeff)
        terms = tuple(sorted((e, c) for e, c in merged.items() if c))
        if not terms:
            raise InvalidInput("the polynomial must be nonzero")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def constant(cls, variables: int, value: int = 1) -> "SparsePolynomial":
        return cls(variables, (((0,) * variables, value),))

    @classmethod
    def linear(cls, coefficients: Sequence[int]) -> "SparsePolynomial":
        d = len(coefficients)
        return cls(d, tuple((tuple(int(i == j) for j in range(d)), c) for i, c in enumerate(coefficients)))

    @property
    def degree(self) -> int:
        return max(sum(e) for e, _ in self.terms)

    def evaluate(self, point: Sequence[CertifiedReal]) -> CertifiedReal:
        total: CertifiedReal = Fraction(0)
        for exps, coeff in self.terms:
            term: CertifiedReal = Fraction(coeff)
            for value, e in zip(point, exps):
                if e:
                    term = cr.mul(term, cr.power(value, e))
            total = cr.add(total, term)
        return total

    def nonzero(self, coords, ambient) -> bool:
        return cr.certified_nonzero(self.evaluate(ambient))

    def describe(self) -> dict:
        return {"kind": "polynomial", "variables": self.variables,
                "terms": [{"exponents": list(e), "coefficient": c} for e, c in self.terms]}


class _ElementPredicate:
    """Base for predicates evaluated on the algebraic integer behind a lattice point."""

    def __init__(self, field: NumberField, module: SublatticeCoords):
        self.field = field
        self.module = module

    def element(self, coords: Sequence[int]) -> AlgebraicInteger:
        d = self.field.degree
        out = [0] * d
        for c, col in zip(coords, self.module.matrix):
            for i in range(d):
                out[i] += c * col[i]
        return self.field.element(out)


class PrimitivityPredicate(_ElementPredicate):
    """The Vandermonde product of the conjugates, decided through the exact discriminant."""

    @property
    def degree(self) -> int:
        d = self.field.degree
        return d * (d - 1) // 2

    def nonzero(self, coords, ambient) -> bool:
        return is_primitive(self.element(coords))

    def describe(self) -> dict:
        return {"kind": "vandermonde", "degree": self.degree}


class NonsparsePredicate(_ElementPredicate):
    """Vandermonde times e_1 ... e_(d-1): primitive with no zero coefficient in the characteristic polynomial."""

    @property
    def degree(self) -> int:
        d = self.field.degree
        return d * (d - 1)

    def nonzero(self, coords, ambient) -> bool:
        alpha = self.element(coords)
        return is_primitive(alpha) and char_poly(alpha).all_coefficients_nonzero()

    def describe(self) -> dict:
        return {"kind": "nonsparse", "degree": self.degree}


# ---------------------------------------------------------------------------
# Problems and certificates

@dataclass
class AvoidanceProblem:
    """
    Omega with sublattices Lambda_i and a predicate P.

    `core` optionally replaces the intersection of the sublattices by a
    full-rank sublattice of it (the lattice of a product of ideals).

    Raises:
        InvalidInput: If there are no sublattices or one has index 1
        NotContained: If `core` is not inside every sublattice
    """
    omega: ExactLattice
    subs: List[SublatticeCoords]
    predicate: Predicate
    core: Optional[SublatticeCoords] = None

    def __post_init__(self):
        if not self.subs:
            raise InvalidInput("at least one sublattice is required")
        for i, sub in enumerate(self.subs):
            if sub.d != self.omega.d:
                raise InvalidInput(f"sublattice {i} has dimension {sub.d}, expected {self.omega.d}")
            if sub.index < 2:
                raise InvalidInput(f"sublattice {i} has index {sub.index}; indices must be at least 2")
        if self.core is None:
            self.core = intersect(self.subs)
        else:
            for i, sub in enumerate(self.subs):
                if not all(sub.contains(col) for col in self.core.matrix):
                    raise NotContained(f"core lattice is not inside sublattice {i}")

    @property
    def d(self) -> int:
        return self.omega.d

    @property
    def indices(self) -> List[int]:
        return [s.index for s in self.subs]

    @property
    def D(self) -> int:
        return self.core.index

    def core_lattice(self) -> ExactLattice:
        return self.omega.sublattice(self.core)

    def outside_all(self, coords: Sequence[int]) -> bool:
        return not any(s.contains(coords) for s in self.subs)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    kind: str = "predicate"


@dataclass
class AvoidanceCertificate:
    z: Tuple[int, ...]
    ambient: Tuple[CertifiedReal, ...]
    sup_norm: CertifiedReal
    bound: CertifiedReal
    bound_name: BoundName
    xi: Tuple[int, ...]
    witness: Tuple[int, ...]
    inputs: Dict[str, object] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def bound_violations(self) -> List[str]:
        return [c.name for c in self.checks if c.kind == "bound" and not c.passed]


def _to_parent(sub: SublatticeCoords, coords: Sequence[int]) -> Tuple[int, ...]:
    d = sub.d
    return tuple(sum(coords[k] * sub.matrix[k][i] for k in range(d)) for i in range(d))


def _le(a: CertifiedReal, b: CertifiedReal) -> bool:
    try:
        return cr.compare(a, b) != Ordering.GREATER
    except PrecisionExhausted:
        return False


def _lt(a: CertifiedReal, b: CertifiedReal) -> bool:
    try:
        return cr.compare(a, b) == Ordering.LESS
    except PrecisionExhausted:
        return False


def _nonnegative(v: CertifiedReal) -> bool:
    try:
        return cr.sign(v) >= 0
    except PrecisionExhausted:
        return False


# ---------------------------------------------------------------------------
# Henk-Thiel witness

@dataclass(frozen=True)
class Witness:
    point: LatticePoint
    bound: CertifiedReal
    at_bound: bool


def henk_thiel_witness(problem: AvoidanceProblem, minima: Optional[MinimaResult] = None) -> Witness:
    """
    The first point of Omega outside every sublattice, in enumeration order.

    The search radius doubles from 1 up to the Henk-Thiel bound computed
    with lambda_1 of the core lattice.

    Raises:
        SearchExhausted: If no point lies within the bound
    """
    omega = problem.omega
    minima = minima or successive_minima(problem.core_lattice())
    volume = cube_volume(omega.norm_model.real, omega.norm_model.complex_pairs)
    bound = henk_thiel_bound(problem.d, problem.indices, problem.D, omega.determinant, minima.values[0], volume)
    logger.debug(f"Henk-Thiel bound {cr.to_decimal(bound, 12)}")

    radius: CertifiedReal = Fraction(1)
    while True:
        radius = cr.minimum(radius, bound)
        found = omega.points_within(cr.mul(radius, radius), keep=lambda pt: problem.outside_all(pt.coords))
        if found:
            x = found[0]
            at_bound = cr.compare(x.norm, bound) == Ordering.EQUAL if x.norm is not None else False
            if at_bound:
                logger.warning(f"Witness {x.coords} has norm equal to the Henk-Thiel bound")
            return Witness(x, bound, at_bound)
        if cr.compare(radius, bound) != Ordering.LESS:
            raise SearchExhausted("no point of Omega outside the sublattices within the Henk-Thiel bound; "
                                  "Omega is covered by the sublattices")
        radius = cr.mul(radius, Fraction(2))


# ---------------------------------------------------------------------------
# Coefficient grids

def _zigzag_rank(k: int) -> int:
    return 2 * k - 1 if k > 0 else -2 * k


def nullstellensatz_grids(m: int, D: int, d: int) -> List[List[Tuple[int, int]]]:
    """S_1 = {Dk + 1} and S_2 = {j} for |k|, |j| <= [m/2] + 1, as (value, rank) pairs."""
    h = m // 2 + 1
    first = [(D * k + 1, _zigzag_rank(k)) for k in range(-h, h + 1)]
    rest = [(j, _zigzag_rank(j)) for j in range(-h, h + 1)]
    return [first] + [list(rest) for _ in range(d - 1)]


def positive_grids(m: int, D: int, d: int) -> List[List[Tuple[int, int]]]:
    """Non-negative grids with at least m + 1 values each: {Dk + 1 : k >= 0} and {0, 1, ...}."""
    size = max(m // 2 + 2, m + 1)
    first = [(D * k + 1, k) for k in range(size)]
    rest = [(j, j) for j in range(size)]
    return [first] + [list(rest) for _ in range(d - 1)]


def grid_order(grids: Sequence[Sequence[Tuple[int, int]]]) -> Iterator[Tuple[int, ...]]:
    """Grid points by ascending max |xi_i|, then lexicographically by rank."""
    levels = sorted({abs(v) for g in grids for v, _ in g})
    for t in levels:
        allowed = [sorted((r, v) for v, r in g if abs(v) <= t) for g in grids]
        for combo in itertools.product(*allowed):
            if any(abs(v) == t for _, v in combo):
                yield tuple(v for _, v in combo)


def cn_select(omega: ExactLattice, x: Sequence[int], vectors: Sequence[Sequence[int]], predicate: Predicate,
              grids: Sequence[Sequence[Tuple[int, int]]]) -> Tuple[Tuple[int, ...], LatticePoint]:
    """
    First grid point xi with P(xi_1 x + sum xi_i v_i) != 0.

    Raises:
        NullstellensatzFailure: If P vanishes on the whole grid
        EnumerationBudgetExceeded: If the walk exceeds the enumeration budget
    """
    basis = [tuple(x)] + [tuple(v) for v in vectors]
    if not are_independent(basis):
        raise InvalidInput("grid vectors are linearly dependent")
    d = omega.d
    for count, xi in enumerate(grid_order(grids)):
        if count >= Var.ENUMERATION_BUDGET:
            raise EnumerationBudgetExceeded(f"coefficient grid walk exceeded {Var.ENUMERATION_BUDGET} points")
        progress.log("debug", f"Grid walk at {count} points", key="grid")
        z = tuple(sum(c * v[i] for c, v in zip(xi, basis)) for i in range(d))
        pt = omega.lattice_point(z)
        if predicate.nonzero(pt.coords, pt.ambient):
            logger.debug(f"Grid point {xi} gives z = {z} after {count + 1} evaluations")
            return xi, pt
    raise NullstellensatzFailure("the predicate vanishes on the whole coefficient grid")


def _choose_complement(x: Sequence[int], vectors: Sequence[Sequence[int]]) -> List[int]:
    """Indices of d-1 vectors independent with x, dropping the smallest-norm vector first."""
    d = len(vectors)
    for omitted in range(d):
        chosen = [i for i in range(d) if i != omitted]
        if are_independent([tuple(x)] + [tuple(vectors[i]) for i in chosen]):
            return chosen
    raise SearchExhausted("no d-1 minima vectors are independent with the witness")


# ---------------------------------------------------------------------------
# Drivers

def _common_checks(problem: AvoidanceProblem, z: LatticePoint, cert: AvoidanceCertificate):
    cert.checks.append(Check("z-in-omega", len(z.coords) == problem.d))
    for i, sub in enumerate(problem.subs):
        cert.checks.append(Check(f"z-outside-sublattice-{i}", not sub.contains(z.coords)))
    cert.checks.append(Check("predicate-nonzero", problem.predicate.nonzero(z.coords, z.ambient)))
    cert.checks.append(Check("norm-within-bound", _le(z.norm, cert.bound), "bound"))


def avoid_point(problem: AvoidanceProblem) -> AvoidanceCertificate:
    """
    A point z of Omega outside every sublattice with P(z) != 0 and |z| within the avoidance bound.

    Raises:
        SearchExhausted: If Omega is covered by the sublattices
        NullstellensatzFailure: If P vanishes on the whole grid
    """
    d, D = problem.d, problem.D
    omega = problem.omega
    core_lattice = problem.core_lattice()
    minima = successive_minima(core_lattice)
    lambda1, lambda_d = minima.values[0], minima.values[-1]
    volume = cube_volume(omega.norm_model.real, omega.norm_model.complex_pairs)
    witness = henk_thiel_witness(problem, minima)
    x = witness.point

    vectors = [_to_parent(problem.core, v) for v in minima.vectors]
    chosen = _choose_complement(x.coords, vectors)
    m = problem.predicate.degree
    xi, z = cn_select(omega, x.coords, [vectors[i] for i in chosen], problem.predicate,
                      nullstellensatz_grids(m, D, d))

    bound = avoidance_bound(d, m, problem.indices, D, omega.determinant, lambda1, volume)
    cert = AvoidanceCertificate(
        z=z.coords, ambient=z.ambient, sup_norm=z.norm, bound=bound, bound_name=BoundName.AVOIDANCE,
        xi=xi, witness=x.coords,
        inputs={"d": d, "m": m, "s": len(problem.subs), "D": D, "indices": problem.indices,
                "det": omega.determinant, "lambda": list(minima.values), "volume": volume,
                "witness_norm": x.norm, "henk_thiel_bound": witness.bound,
                "minima_vectors": [list(vectors[i]) for i in chosen]},
    )
    _common_checks(problem, z, cert)
    cert.checks.append(Check("xi1-congruent-1-mod-D", (xi[0] - 1) % D == 0))
    cert.checks.append(Check("witness-outside-sublattices", problem.outside_all(x.coords)))
    cert.checks.append(Check("witness-within-henk-thiel", _le(x.norm, witness.bound), "bound"))
    cert.checks.append(Check("minkowski-last-minimum",
                             _le(lambda_d, minkowski_last_minimum(d, D, omega.determinant, lambda1, volume)), "bound"))
    construction = construction_bound(d, xi, x.norm, lambda_d)
    cert.inputs["construction_bound"] = construction
    cert.checks.append(Check("norm-within-construction-bound", _le(z.norm, construction), "bound"))
    if witness.at_bound:
        cert.flags.append("henk-thiel-equality")
    _log_certificate("avoid_point", cert)
    return cert


def positive_avoid_point(problem: AvoidanceProblem) -> AvoidanceCertificate:
    """
    A point z in the closed positive orthant of Omega outside every sublattice with P(z) != 0.

    The bound uses an upper bound on the covering radius in place of the
    exact one and is recorded as conservative.

    Raises:
        NotTotallyReal: If Omega lives in a space with complex coordinates
        NoPositiveAnchor: If the core lattice has no usable anchor
    """
    omega = problem.omega
    if omega.norm_model.complex_pairs:
        raise NotTotallyReal("positive points need a lattice in R^d")
    d, D = problem.d, problem.D
    positive: PositiveMinima = positive_minima(problem.core_lattice())
    minima = positive.minima
    mu = positive.covering_radius
    witness = henk_thiel_witness(problem, minima)
    x = witness.point

    anchor = _to_parent(problem.core, positive.anchor)
    flags = ["conservative-bound"]
    if all(_nonnegative(c) for c in x.ambient):
        y = x.coords
        shift = 0
        flags.append("witness-already-positive")
    else:
        shift = ceiling(x.norm)
        y = tuple(a + shift * b for a, b in zip(x.coords, anchor))
    y_point = omega.lattice_point(y)

    positive_vectors = [_to_parent(problem.core, v) for v in positive.vectors]
    candidates = [(anchor, None)] + [(tuple(a + b for a, b in zip(v, anchor)), j)
                                     for j, v in enumerate(positive_vectors)]
    chosen = _choose_shifted(omega, y, candidates)
    m = problem.predicate.degree
    xi, z = cn_select(omega, y, [u for u, _ in chosen], problem.predicate, positive_grids(m, D, d))

    bound = positive_avoidance_bound(d, m, problem.indices, D, omega.determinant, list(minima.values), mu)
    cert = AvoidanceCertificate(
        z=z.coords, ambient=z.ambient, sup_norm=z.norm, bound=bound, bound_name=BoundName.POSITIVE_AVOIDANCE,
        xi=xi, witness=x.coords,
        inputs={"d": d, "m": m, "s": len(problem.subs), "D": D, "indices": problem.indices,
                "det": omega.determinant, "lambda": list(minima.values), "mu_upper": mu,
                "restricted_lambda": list(positive.values), "anchor": list(anchor), "shift": shift,
                "y": list(y), "witness_norm": x.norm, "henk_thiel_bound": witness.bound,
                "u_vectors": [list(u) for u, _ in chosen]},
        flags=flags,
    )
    _common_checks(problem, z, cert)
    cert.checks.append(Check("z-nonnegative", all(_nonnegative(c) for c in z.ambient)))
    cert.checks.append(Check("y-nonnegative", all(_nonnegative(c) for c in y_point.ambient)))
    cert.checks.append(Check("y-outside-sublattices", problem.outside_all(y)))
    cert.checks.append(Check("anchor-at-least-one",
                             all(_le(Fraction(1), c) for c in omega.lattice_point(anchor).ambient)))
    cert.checks.append(Check("anchor-in-core", problem.core.contains(anchor)))
    cert.checks.append(Check("anchor-norm", _le(positive.anchor_norm, anchor_bound(mu)), "bound"))
    cert.checks.append(Check("restricted-first-minimum", _le(positive.values[0], anchor_bound(mu)), "bound"))
    for i in range(1, d):
        cert.checks.append(Check(f"restricted-minimum-{i + 1}",
                                 _le(positive.values[i], restricted_minimum_bound(minima.values[i], mu)), "bound"))
    for u, j in chosen:
        if j is not None:
            norm = omega.lattice_point(u).norm
            cert.checks.append(Check(f"shifted-vector-{j + 1}",
                                     _le(norm, shifted_vector_bound(minima.values[j], mu)), "bound"))
    if shift:
        cert.checks.append(Check("shifted-witness-norm", _le(y_point.norm, shifted_witness_bound(x.norm, mu)), "bound"))
    if witness.at_bound:
        cert.flags.append("henk-thiel-equality")
    _log_certificate("positive_avoid_point", cert)
    return cert


def _choose_shifted(omega: ExactLattice, y: Sequence[int], candidates) -> List[Tuple[Tuple[int, ...], Optional[int]]]:
    """Greedy d-1 shifted vectors independent with y, largest norm first, ties lexicographically largest."""
    d = omega.d
    points = [(omega.lattice_point(u), j) for u, j in candidates]

    def order(a, b) -> int:
        c = cr.compare(b[0].squared_norm, a[0].squared_norm, tie_bits=Var.TIE_PRECISION)
        if c != Ordering.EQUAL:
            return int(c)
        return -1 if a[0].coords > b[0].coords else (1 if a[0].coords < b[0].coords else 0)

    chosen: List[Tuple[Tuple[int, ...], Optional[int]]] = []
    for pt, j in sorted(points, key=cmp_to_key(order)):
        if len(chosen) == d - 1:
            break
        trial = [tuple(y)] + [u for u, _ in chosen] + [pt.coords]
        if are_independent(trial):
            chosen.append((pt.coords, j))
    if len(chosen) != d - 1:
        raise SearchExhausted("shifted positive vectors do not complete a basis with the witness")
    return chosen


def _log_certificate(name: str, cert: AvoidanceCertificate):
    status = "passed" if cert.passed else f"FAILED {[c.name for c in cert.checks if not c.passed]}"
    logger.info(f"{name}: z = {cert.z}, |z| = {cr.to_decimal(cert.sup_norm, 12)}, "
                f"bound = {cr.to_decimal(cert.bound, 12)}, checks {status}")

# LatticeAvoid/io/descriptors.py
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..avoidance import AvoidanceProblem, SparsePolynomial
from ..core import certified_reals as cr
from ..core.certified_reals import CertifiedReal, QuadValue
from ..core.lattice_core import ExactLattice, NormModel, SublatticeCoords
from ..core.nf_core import NumberField
from ..ideals import AnyIdeal, IntegralIdeal, QuadIdeal, quad_canonical, quadratic_field
from ..utils.exceptions import InvalidInput, SingularMatrix

logger = logging.getLogger(__name__)

_GENERIC_FIELDS: Dict[tuple, NumberField] = {}


class DescriptorValidator:
    """Parsing and validation of the JSON descriptors read by the command line."""

    @staticmethod
    def load_json(path: Union[str, Path]) -> dict:
        """Read a JSON descriptor file."""
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise InvalidInput(f"descriptor file not found: {path}") from None
        except json.JSONDecodeError as e:
            raise InvalidInput(f"descriptor {path} is not valid JSON: {e}") from None
        if not isinstance(data, dict):
            raise InvalidInput(f"descriptor {path} must hold a JSON object")
        return data

    @staticmethod
    def parse_int(value, name: str) -> int:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise InvalidInput(f"{name} must be an integer, got {value!r}")
        try:
            return int(value)
        except ValueError:
            raise InvalidInput(f"{name} must be an integer, got {value!r}") from None

    @staticmethod
    def parse_real(value) -> CertifiedReal:
        """
        An exact lattice entry: an integer, a rational string "p/q", a
        quadratic surd {"p": .., "q": .., "D": ..} or a certificate exact form.
        """
        if isinstance(value, bool):
            raise InvalidInput(f"not a number: {value!r}")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value)
            except ValueError:
                raise InvalidInput(f"not a rational number: {value!r}") from None
        if isinstance(value, dict):
            if "kind" in value:
                try:
                    return cr.from_exact_form(value)
                except (KeyError, ValueError) as e:
                    raise InvalidInput(f"malformed exact form {value!r}: {e}") from None
            try:
                p, q, D = Fraction(str(value["p"])), Fraction(str(value["q"])), int(value["D"])
            except (KeyError, ValueError):
                raise InvalidInput(f"quadratic surd needs p, q and D: {value!r}") from None
            if D <= 1 or not cr._is_squarefree(D):
                raise InvalidInput(f"surd radicand must be a squarefree integer > 1, got {D}")
            return cr._coerce(QuadValue(p, q, D))
        raise InvalidInput(f"unsupported number {value!r}")

    @staticmethod
    def parse_field(desc) -> NumberField:
        """{"quadratic": D} or {"generic": {"poly": [c0, ..., 1], "basis": [...]}}."""
        if not isinstance(desc, dict):
            raise InvalidInput(f"field descriptor must be an object, got {desc!r}")
        if "quadratic" in desc:
            return quadratic_field(DescriptorValidator.parse_int(desc["quadratic"], "quadratic"))
        generic = desc.get("generic", desc if "poly" in desc else None)
        if not isinstance(generic, dict) or "poly" not in generic:
            raise InvalidInput(f"field descriptor needs 'quadratic' or 'generic.poly': {desc!r}")
        poly = tuple(DescriptorValidator.parse_int(c, "poly coefficient") for c in generic["poly"])
        basis = generic.get("basis")
        basis_key = None if basis is None else tuple(tuple(str(Fraction(str(c))) for c in row) for row in basis)
        key = (poly, basis_key)
        if key not in _GENERIC_FIELDS:
            rows = None if basis is None else [[Fraction(str(c)) for c in row] for row in basis]
            _GENERIC_FIELDS[key] = NumberField.generic(poly, rows)
            logger.debug(f"Built field {_GENERIC_FIELDS[key]!r}")
        return _GENERIC_FIELDS[key]

    @staticmethod
    def parse_ideal(desc, field: Optional[NumberField] = None) -> AnyIdeal:
        """{"quad": {D, a, b, g}}, {"generators": [...]} or {"zbasis": [...]} (columns over the integral basis)."""
        if not isinstance(desc, dict):
            raise InvalidInput(f"ideal descriptor must be an object, got {desc!r}")
        if "quad" in desc:
            q = desc["quad"]
            try:
                D, a, b, g = (DescriptorValidator.parse_int(q[k], k) for k in ("D", "a", "b", "g"))
            except KeyError as e:
                raise InvalidInput(f"quad ideal missing {e}") from None
            if field is not None and field.D != D:
                raise InvalidInput(f"quad ideal over D = {D} does not live in {field!r}")
            return quad_canonical(D, a, b, g)
        if field is None:
            raise InvalidInput("a field descriptor is required for generator or Z-basis ideals")
        if "generators" in desc:
            gens = [[DescriptorValidator.parse_int(c, "generator coordinate") for c in gen] for gen in desc["generators"]]
            ideal = IntegralIdeal.from_generators(field, gens)
        elif "zbasis" in desc:
            cols = [[DescriptorValidator.parse_int(c, "basis coordinate") for c in col] for col in desc["zbasis"]]
            ideal = IntegralIdeal.from_zbasis(field, cols)
        else:
            raise InvalidInput(f"ideal descriptor needs 'quad', 'generators' or 'zbasis': {desc!r}")
        return QuadIdeal.from_ideal(ideal) if field.is_quadratic else ideal

    @staticmethod
    def parse_lattice(desc) -> ExactLattice:
        """A list of basis columns, or {"columns": [...], "complex_pairs": k}."""
        if isinstance(desc, dict):
            columns = desc.get("columns")
            pairs = DescriptorValidator.parse_int(desc.get("complex_pairs", 0), "complex_pairs")
        else:
            columns, pairs = desc, 0
        if not isinstance(columns, list) or not columns:
            raise InvalidInput("lattice needs a nonempty list of basis columns")
        d = len(columns)
        if any(not isinstance(col, list) or len(col) != d for col in columns):
            raise InvalidInput(f"lattice basis must be {d} columns of length {d}")
        if pairs < 0 or 2 * pairs > d:
            raise InvalidInput(f"complex_pairs = {pairs} does not fit dimension {d}")
        cols = [[DescriptorValidator.parse_real(v) for v in col] for col in columns]
        try:
            return ExactLattice(cols, NormModel(d - 2 * pairs, pairs))
        except SingularMatrix as e:
            raise InvalidInput(f"lattice basis is singular: {e}") from None

    @staticmethod
    def parse_sublattice(desc, d: int) -> SublatticeCoords:
        """Integer generator columns (or {"columns": ...}) in coordinates of the parent basis."""
        columns = desc.get("columns") if isinstance(desc, dict) else desc
        if not isinstance(columns, list) or not columns:
            raise InvalidInput("sublattice needs a nonempty list of integer columns")
        cols = [[DescriptorValidator.parse_int(v, "sublattice entry") for v in col] for col in columns]
        if any(len(col) != d for col in cols):
            raise InvalidInput(f"sublattice columns must have length {d}")
        try:
            return SublatticeCoords.from_generators(cols, d)
        except SingularMatrix as e:
            raise InvalidInput(f"sublattice does not have full rank: {e}") from None

    @staticmethod
    def parse_polynomial(desc, d: int) -> SparsePolynomial:
        """Terms {"exponents": [...], "coefficient": c}; a missing polynomial means P = 1."""
        if desc is None:
            return SparsePolynomial.constant(d)
        terms = desc.get("terms") if isinstance(desc, dict) else desc
        if not isinstance(terms, list):
            raise InvalidInput("polynomial must be a list of terms")
        parsed = []
        for term in terms:
            if not isinstance(term, dict) or "exponents" not in term or "coefficient" not in term:
                raise InvalidInput(f"polynomial term needs exponents and coefficient: {term!r}")
            exps = tuple(DescriptorValidator.parse_int(e, "exponent") for e in term["exponents"])
            parsed.append((exps, DescriptorValidator.parse_int(term["coefficient"], "coefficient")))
        return SparsePolynomial(d, tuple(parsed))

    @staticmethod
    def parse_problem(desc: dict) -> AvoidanceProblem:
        """{"omega": lattice, "sublattices": [sublattice, ...], "polynomial": terms}."""
        if "omega" not in desc or "sublattices" not in desc:
            raise InvalidInput("problem needs 'omega' and 'sublattices'")
        omega = DescriptorValidator.parse_lattice(desc["omega"])
        subs = [DescriptorValidator.parse_sublattice(s, omega.d) for s in desc["sublattices"]]
        polynomial = DescriptorValidator.parse_polynomial(desc.get("polynomial"), omega.d)
        return AvoidanceProblem(omega, subs, polynomial)

    @staticmethod
    def parse_ideal_task(desc: dict) -> Tuple[NumberField, AnyIdeal, List[AnyIdeal]]:
        """{"field": .., "ideal": .. (defaults to O_K), "avoid": [ideal, ...]}."""
        field = DescriptorValidator.parse_field(desc["field"]) if "field" in desc else None
        ideal_desc = desc.get("ideal")
        if ideal_desc is None:
            if field is None:
                raise InvalidInput("task needs a field or an ideal")
            ideal: AnyIdeal = IntegralIdeal.unit(field)
            if field.is_quadratic:
                ideal = QuadIdeal.from_ideal(ideal)
        else:
            ideal = DescriptorValidator.parse_ideal(ideal_desc, field)
        field = field or ideal.field
        avoid = desc.get("avoid")
        if not isinstance(avoid, list) or not avoid:
            raise InvalidInput("task needs a nonempty 'avoid' list of ideals")
        return field, ideal, [DescriptorValidator.parse_ideal(j, field) for j in avoid]


def squarefree_range(lo: int, hi: int) -> List[int]:
    """Squarefree D in [lo, hi] other than 0 and 1."""
    return [D for D in range(lo, hi + 1) if D not in (0, 1) and cr._is_squarefree(abs(D))]


# Convenience aliases
load_json = DescriptorValidator.load_json
parse_int = DescriptorValidator.parse_int
parse_real = DescriptorValidator.parse_real
parse_field = DescriptorValidator.parse_field
parse_ideal = DescriptorValidator.parse_ideal
parse_lattice = DescriptorValidator.parse_lattice
parse_sublattice = DescriptorValidator.parse_sublattice
parse_polynomial = DescriptorValidator.parse_polynomial
parse_problem = DescriptorValidator.parse_problem
parse_ideal_task = DescriptorValidator.parse_ideal_task

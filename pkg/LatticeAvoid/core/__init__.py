# LatticeAvoid core module
from .certified_reals import Ordering, QuadValue, IntervalReal, compare, certified_nonzero
from .nf_core import AlgebraicInteger, IntPolynomial, NumberField, char_poly, embed, height, mahler_measure
from .lattice_core import ExactLattice, NormModel, SublatticeCoords, intersect, successive_minima

__all__ = [
    "Ordering",
    "QuadValue",
    "IntervalReal",
    "compare",
    "certified_nonzero",
    "AlgebraicInteger",
    "IntPolynomial",
    "NumberField",
    "char_poly",
    "embed",
    "height",
    "mahler_measure",
    "ExactLattice",
    "NormModel",
    "SublatticeCoords",
    "intersect",
    "successive_minima",
]

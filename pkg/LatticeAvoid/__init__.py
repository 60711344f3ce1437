"""LatticeAvoid: certified lattice points avoiding sublattices and small-height algebraic integers."""

__version__ = "0.1.0"

__all__ = ["__version__"]

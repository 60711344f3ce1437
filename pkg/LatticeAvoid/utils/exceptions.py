"""
Exception hierarchy for LatticeAvoid.

Every error raised by the library derives from ``LatticeAvoidError`` and
carries the process exit code the command line maps it to:

- 2: invalid input (malformed descriptors, non-ideals, containment failures)
- 3: inconclusive (precision or enumeration budget exhausted)
- 4: a certified bound was violated
"""


class LatticeAvoidError(Exception):
    """Base class for all LatticeAvoid errors."""
    exit_code = 2


class InvalidInput(LatticeAvoidError):
    """Custom exception raised when a descriptor, flag or argument is malformed."""
    exit_code = 2


class PrecisionExhausted(LatticeAvoidError):
    """Custom exception raised when a certified comparison or refinement hits the precision cap."""
    exit_code = 3


class SingularMatrix(LatticeAvoidError):
    """Custom exception raised when a lattice basis is not of full rank."""
    exit_code = 2


class EnumerationBudgetExceeded(LatticeAvoidError):
    """Custom exception raised when an enumeration would examine more points than allowed."""
    exit_code = 3


class SearchExhausted(LatticeAvoidError):
    """Custom exception raised when no lattice point avoids the sublattices within the proven radius."""
    exit_code = 2


class NullstellensatzFailure(LatticeAvoidError):
    """Custom exception raised when a polynomial vanishes on the whole search grid."""
    exit_code = 2


class GridExhausted(LatticeAvoidError):
    """Custom exception raised when the guaranteed non-vanishing grid contains no valid point."""
    exit_code = 4


class NoPositiveAnchor(LatticeAvoidError):
    """Custom exception raised when no lattice point with all coordinates at least 1 is found."""
    exit_code = 3


class NotAnIdeal(LatticeAvoidError):
    """Custom exception raised when a Z-module is not closed under the ring of integers."""
    exit_code = 2


class InvariantViolation(LatticeAvoidError):
    """Custom exception raised when an internal consistency check fails."""
    exit_code = 2


class NotContained(LatticeAvoidError):
    """Custom exception raised when a sublattice or ideal is not contained in its parent."""
    exit_code = 2


class NonIntegralForm(LatticeAvoidError):
    """Custom exception raised when a normalised norm form has non-integer coefficients."""
    exit_code = 2


class NotTotallyReal(LatticeAvoidError):
    """Custom exception raised when a totally real field is required."""
    exit_code = 2


class BoundViolation(LatticeAvoidError):
    """Custom exception raised when a computed witness exceeds a certified bound."""
    exit_code = 4


class NotPrincipal(LatticeAvoidError):
    """Custom exception raised when the norm form provably does not represent 1."""
    exit_code = 3

    def __init__(self, message: str, form_minimum=None):
        super().__init__(message)
        self.form_minimum = form_minimum


class Inconclusive(LatticeAvoidError):
    """Custom exception raised when a search stops at its cap below the proven bound."""
    exit_code = 3

    def __init__(self, message: str, searched: int = 0):
        super().__init__(message)
        self.searched = searched

"""
Configuration management for LatticeAvoid.

This module loads tunables from environment variables (optionally via a
``.env`` file read in ``__main__``) with type conversion and range checks. It
includes:

- Environment variable parsing with type safety
- Clamping of precision, dimension and enumeration caps to sane ranges
- Logging configuration defaults

Values are read once at import time; the command line may override them for
a single run through ``cli.RunConfig``.
"""

import os
from logging import getLogger

logger = getLogger(__name__)


def get_env(name: str, default=None, is_bool: bool = False, is_int: bool = False):
    """
    Read an AVL_* tunable with type conversion.

    Every tunable has a default, so a missing variable is never fatal. Integers
    may use underscores (1_000_000); an unparsable integer logs an error and
    falls back to the default.
    """
    value = os.environ.get(name, default)
    logger.debug(f"Config: Reading {name} = {value}")

    if value is None:
        return None

    if is_bool:
        return str(value).lower() in ("true", "1", "yes", "on")
    elif is_int:
        try:
            return int(str(value).replace("_", ""))
        except (ValueError, TypeError):
            logger.error(f"Invalid integer value for {name}: '{value}'. Using default: {default}")
            try:
                return int(default) if default is not None else None
            except (ValueError, TypeError):
                logger.error(f"Default value '{default}' for {name} is also not a valid integer.")
                return default
    return value


def _clamp(name: str, value: int, low: int, high: int) -> int:
    """Clamp an integer setting to [low, high], warning when it was out of range."""
    if value < low or value > high:
        clamped = min(max(value, low), high)
        logger.warning(f"{name} value {value} outside range {low}-{high}. Adjusting to {clamped}.")
        return clamped
    return value


class Var:
    """
    Application configuration container loaded from environment variables.

    Key configuration categories:
    - Certified arithmetic precision (cap, default, enumeration tie tolerance)
    - Enumeration and search budgets
    - Sweep worker pool size
    - Logging destinations
    """

    # Certified arithmetic: all widths are powers of two, given in bits
    PRECISION_CAP = _clamp("AVL_PRECISION_CAP", get_env("AVL_PRECISION_CAP", 256, is_int=True), 64, 4096)
    DEFAULT_PRECISION = _clamp("AVL_DEFAULT_PRECISION", get_env("AVL_DEFAULT_PRECISION", 60, is_int=True), 10, 256)
    TIE_PRECISION = _clamp("AVL_TIE_PRECISION", get_env("AVL_TIE_PRECISION", 96, is_int=True), 16, PRECISION_CAP)

    # Lattice and field size limits
    MAX_DIMENSION = _clamp("AVL_MAX_DIMENSION", get_env("AVL_MAX_DIMENSION", 8, is_int=True), 1, 8)
    MAX_DEGREE = _clamp("AVL_MAX_DEGREE", get_env("AVL_MAX_DEGREE", 8, is_int=True), 1, 8)
    GRID_DEGREE_CAP = _clamp("AVL_GRID_DEGREE_CAP", get_env("AVL_GRID_DEGREE_CAP", 5, is_int=True), 1, 8)

    # Search budgets
    ENUMERATION_BUDGET = get_env("AVL_ENUMERATION_BUDGET", 2_000_000, is_int=True)
    HMIN_NORM_CAP = get_env("AVL_HMIN_NORM_CAP", 10_000, is_int=True)
    GENERATOR_CAP = get_env("AVL_GENERATOR_CAP", 2_000, is_int=True)

    # Sweep worker pool
    SWEEP_WORKERS = _clamp("AVL_SWEEP_WORKERS", get_env("AVL_SWEEP_WORKERS", 1, is_int=True), 1, 64)

    # Logging
    LOG_FILE = get_env("AVL_LOG_FILE", "latticeavoid.log")
    LOG_LEVEL = str(get_env("AVL_LOG_LEVEL", "INFO")).upper()

    if ENUMERATION_BUDGET is None or ENUMERATION_BUDGET < 1:
        logger.error(f"Invalid AVL_ENUMERATION_BUDGET value: {ENUMERATION_BUDGET}. Using 2000000.")
        ENUMERATION_BUDGET = 2_000_000

    if HMIN_NORM_CAP is None or HMIN_NORM_CAP < 1:
        logger.error(f"Invalid AVL_HMIN_NORM_CAP value: {HMIN_NORM_CAP}. Using 10000.")
        HMIN_NORM_CAP = 10_000

    if GENERATOR_CAP is None or GENERATOR_CAP < 1:
        logger.error(f"Invalid AVL_GENERATOR_CAP value: {GENERATOR_CAP}. Using 2000.")
        GENERATOR_CAP = 2_000

    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        logger.warning(f"Unknown AVL_LOG_LEVEL '{LOG_LEVEL}'. Falling back to INFO.")
        LOG_LEVEL = "INFO"

"""
Command-line entry point for LatticeAvoid.

Loads ``.env`` before the configuration is imported, sets up logging to a
file and stderr (stdout carries the one-line run summary) and hands the
arguments to ``cli.run``.
"""

import sys
import logging
from dotenv import load_dotenv

# Load environment variables before importing configuration
load_dotenv()

from .config import Var
from .cli import run

handlers = [logging.StreamHandler(sys.stderr)]
if Var.LOG_FILE:
    handlers.insert(0, logging.FileHandler(Var.LOG_FILE))

logging.basicConfig(
    level=Var.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=handlers
)

# Reduce log noise from third-party libraries
logging.getLogger("sympy").setLevel(logging.WARNING)
logging.getLogger("mpmath").setLevel(logging.WARNING)
logger = logging.getLogger(__name__)


def main() -> int:
    logger.debug(f"Starting latticeavoid with arguments {sys.argv[1:]}")
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())

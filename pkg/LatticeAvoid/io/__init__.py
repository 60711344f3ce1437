# LatticeAvoid/io/__init__.py
"""
Descriptor parsing and certificate rendering.

Descriptors are the JSON inputs of the command line; certificates and sweep
CSVs are its outputs. Both sides keep every number exact.
"""

from .descriptors import DescriptorValidator
from .certificates import render_real, write_csv, write_json

__all__ = [
    "DescriptorValidator",
    "render_real",
    "write_csv",
    "write_json"
]

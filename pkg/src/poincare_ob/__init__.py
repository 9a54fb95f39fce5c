"""Obstructions to Poincare families of principal G-bundles, computed from root data."""

from .obstruction import Hypotheses, ObstructionReport, analyze, generic_order, global_order, report
from .presets import parse_group
from .psi import psi_group, psi_prime
from .rootdata import isogeny_data

__version__ = "0.1.0"

__all__ = [
    "Hypotheses",
    "ObstructionReport",
    "analyze",
    "generic_order",
    "global_order",
    "isogeny_data",
    "parse_group",
    "psi_group",
    "psi_prime",
    "report",
]

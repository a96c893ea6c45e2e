"""Mordell-Weil sieve for rational points on genus-2 curves y^2 = F(X, Z)."""

from .curve import CurveModel, classify_reduction, validate_model
from .localdata import MWInput, ScanReport, make_constraint, scan
from .sieve import FGGroup, find_q_sequence, run_sieve

__version__ = "0.1.0"

__all__ = [
    "CurveModel",
    "FGGroup",
    "MWInput",
    "ScanReport",
    "classify_reduction",
    "find_q_sequence",
    "make_constraint",
    "run_sieve",
    "scan",
    "validate_model",
]

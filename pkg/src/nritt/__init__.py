"""Functional calculi for n-Ritt and n-sectorial matrices."""
__version__ = "0.1.0"

from . import calculus, contours, funclass, matrixkit, multipliers, regions, stochastics
from .calculus import (
    apply_extended,
    apply_ritt,
    apply_sectorial,
    classify_ritt,
    classify_sectorial,
    estimate_calculus_norm,
    transfer_check,
)
from .errors import NrittError
from .matrixkit import Operator
from .regions import Region, nsector, nstolz

__all__ = [
    "__version__",
    "calculus",
    "contours",
    "funclass",
    "matrixkit",
    "multipliers",
    "regions",
    "stochastics",
    "Operator",
    "Region",
    "nsector",
    "nstolz",
    "NrittError",
    "apply_ritt",
    "apply_sectorial",
    "apply_extended",
    "classify_ritt",
    "classify_sectorial",
    "estimate_calculus_norm",
    "transfer_check",
]

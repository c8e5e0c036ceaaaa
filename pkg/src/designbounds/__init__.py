"""Exact variance-method bounds, design validators and small exhaustive oracles."""

from .bounds import BoundReport
from .designs import IncidenceStructure, OrthogonalArray, ValidationReport
from .moments import MomentSummary, summarize, variance_slack

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "IncidenceStructure",
    "MomentSummary",
    "OrthogonalArray",
    "ValidationReport",
    "summarize",
    "variance_slack",
]

"""Combinatorial configuration engine for modular products."""

from .model import MorphModel, load_model, load_model_file, parse_model, save_model
from .ranking import CriteriaTable, dominance_layers, outrank_layers
from .synthesis import (
    CompositeSolution,
    ExcellenceVector,
    compose_node,
    dominates,
    excellence,
)

__version__ = "0.1.0"

__all__ = [
    "CompositeSolution",
    "CriteriaTable",
    "ExcellenceVector",
    "MorphModel",
    "compose_node",
    "dominance_layers",
    "dominates",
    "excellence",
    "load_model",
    "load_model_file",
    "outrank_layers",
    "parse_model",
    "save_model",
    "__version__",
]

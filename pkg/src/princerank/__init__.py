"""Signed power-flow networks, PrinceRank valuation and tactic search."""
from ._kernels import BACKEND
from .core import (
    DEFAULT_PARAMS,
    InvalidStructure,
    ModelParams,
    PowerStructure,
    Trajectory,
    ValidationReport,
    simulate,
    step,
    validate_structure,
)
from .valuation import (
    DivergentDiscount,
    RankReport,
    color_for,
    princerank,
    princerank_details,
    rank_structures,
    utility,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_PARAMS",
    "DivergentDiscount",
    "InvalidStructure",
    "ModelParams",
    "PowerStructure",
    "RankReport",
    "Trajectory",
    "ValidationReport",
    "color_for",
    "princerank",
    "princerank_details",
    "rank_structures",
    "simulate",
    "step",
    "utility",
    "validate_structure",
]

"""Governability analysis for human-agent collectives.

Core objects: autonomy profiles and validated collective specifications
(:mod:`hacgov.core`), cycle structure (:mod:`hacgov.cycles`), horizon
classification (:mod:`hacgov.horizon`), attribution audits
(:mod:`hacgov.attribution`), autonomy estimation (:mod:`hacgov.estimation`),
the structural-model lab (:mod:`hacgov.scm`), and the reproducible
experiment harness (:mod:`hacgov.experiments`).
"""

from .core import (
    AgentDecl,
    AutonomyProfile,
    HacSpec,
    InteractionGraph,
    WeightVector,
    aggregate_autonomy,
    compound_autonomy,
    validate_hac,
)
from .cycles import CycleReport, analyze_cycles, enumerate_elementary_cycles, summarize_mixed_cycles
from .horizon import (
    HorizonReport,
    accountability_horizon,
    classify,
    collective_autonomy_index,
    combined_horizon,
    deficit_and_budget,
    min_compound_autonomy,
)

__all__ = [
    "AgentDecl",
    "AutonomyProfile",
    "CycleReport",
    "HacSpec",
    "HorizonReport",
    "InteractionGraph",
    "WeightVector",
    "accountability_horizon",
    "aggregate_autonomy",
    "analyze_cycles",
    "classify",
    "collective_autonomy_index",
    "combined_horizon",
    "compound_autonomy",
    "deficit_and_budget",
    "enumerate_elementary_cycles",
    "min_compound_autonomy",
    "summarize_mixed_cycles",
    "validate_hac",
]

__version__ = "0.1.0"

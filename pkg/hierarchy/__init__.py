from .base_stage import BaseStage
from .bounds import (
    HierarchyError,
    bonferroni_bounds,
    bonferroni_with_status,
    extract_moments,
    lower_bound,
    relative_gap,
    upper_bound,
)
from .executor_stage import ExecutorStage
from .planner_stage import PlannerStage
from .report import CSV_COLUMNS, BoundsReport, MomentEstimate, ReportRow
from .sweep import SweepError, sweep
from .verifier_stage import VerifierStage

__all__ = [
    "CSV_COLUMNS",
    "BaseStage",
    "BoundsReport",
    "ExecutorStage",
    "HierarchyError",
    "MomentEstimate",
    "PlannerStage",
    "ReportRow",
    "SweepError",
    "VerifierStage",
    "bonferroni_bounds",
    "bonferroni_with_status",
    "extract_moments",
    "lower_bound",
    "relative_gap",
    "sweep",
    "upper_bound",
]

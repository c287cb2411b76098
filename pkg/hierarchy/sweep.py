"""
Degree sweep for Moment Bounds
Planner -> executor -> verifier over a range of relaxation orders
"""

import logging
from typing import Optional, Sequence, Union

from config import RelaxationOptions, SolverSettings
from geometry.problem import ProblemSpec, normalize
from .executor_stage import ExecutorStage
from .planner_stage import PlannerStage
from .report import BoundsReport
from .verifier_stage import VerifierStage

logger = logging.getLogger(__name__)


class SweepError(RuntimeError):
    """Raised when the sweep cannot even be planned"""


def _stokes_modes(use_stokes: Union[bool, str, Sequence[bool]]):
    if use_stokes == "both":
        return (False, True)
    if isinstance(use_stokes, bool):
        return (use_stokes,)
    return tuple(bool(mode) for mode in use_stokes)


def _sides(sides: Union[str, Sequence[str]]):
    if sides == "both":
        return ("upper", "lower")
    if isinstance(sides, str):
        return (sides,)
    return tuple(sides)


def sweep(
    spec: ProblemSpec,
    d_min: int,
    d_max: int,
    use_stokes: Union[bool, str, Sequence[bool]] = True,
    sides: Union[str, Sequence[str]] = "both",
    settings: Optional[SolverSettings] = None,
    options: Optional[RelaxationOptions] = None,
    workers: int = 1,
    bonferroni_depth: Optional[int] = None,
    moment_order: Optional[int] = None,
    backend: str = "cvxpy",
) -> BoundsReport:
    """
    Compute bound rows for every degree in [d_min, d_max]

    Args:
        spec: Problem (normalized internally)
        d_min: First relaxation order
        d_max: Last relaxation order
        use_stokes: True, False, "both", or a sequence of modes
        sides: "upper", "lower", "both", or a sequence of sides
        settings: Solver settings
        options: Relaxation options
        workers: Thread pool size for independent jobs
        bonferroni_depth: Also run Bonferroni truncations at this depth
        moment_order: Extract moments up to this degree from upper-bound solves
        backend: Solver backend name

    Returns:
        BoundsReport; failed jobs appear as rows with a failure status
    """
    spec = normalize(spec)
    options = options or RelaxationOptions()
    settings = settings or SolverSettings()

    planner = PlannerStage(spec)
    plan_result = planner.process(
        {
            "d_min": d_min,
            "d_max": d_max,
            "stokes_modes": _stokes_modes(use_stokes),
            "sides": _sides(sides),
            "bonferroni_depth": bonferroni_depth,
            "options": options,
        }
    )
    if not plan_result["success"]:
        raise SweepError(f"Planning failed: {plan_result['error']}")
    logger.info("Planned %d jobs for %r (d0=%d)", len(plan_result["plan"]["jobs"]), spec.name, plan_result["plan"]["d0"])

    executor = ExecutorStage(spec, settings, options, workers, backend)
    exec_result = executor.process({"plan": plan_result["plan"]})

    verifier = VerifierStage(spec, moment_order, options.basis)
    verify_result = verifier.process({"plan": plan_result["plan"], "results": exec_result["results"]})
    report = verify_result["report"]
    report.settings = {
        "solver": settings.model_dump(),
        "relaxation": options.model_dump(),
        "d_min": d_min,
        "d_max": d_max,
        "bonferroni_depth": bonferroni_depth,
        "backend": backend,
    }
    for issue in verify_result["issues"]:
        logger.warning("%s: %s", spec.name, issue)
    return report

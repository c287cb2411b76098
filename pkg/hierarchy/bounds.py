"""
Bound computations for Moment Bounds
Upper bounds from the union relaxation, lower bounds through the complement,
Bonferroni truncations and moment extraction
"""

import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from algebra.monomials import monomial_index
from algebra.polynomial import Polynomial
from config import RelaxationOptions, SolverSettings
from geometry.problem import (
    PieceCountError,
    ProblemSpec,
    complement_union,
    k_intersections,
    normalize,
    total_mass,
)
from relaxation.bases import get_basis
from relaxation.builder import ConicProblem, build_qd
from relaxation.stokes import build_qd_stokes
from solvers import solve
from solvers.base_backend import SolveResult, SolveStatus
from .report import MomentEstimate

logger = logging.getLogger(__name__)


class HierarchyError(RuntimeError):
    """A relaxation solve did not succeed; carries the degree, side and solver outcome"""

    def __init__(self, d: int, side: str, result: SolveResult):
        self.d = d
        self.side = side
        self.result = result
        super().__init__(f"{side} bound at d={d} failed: {result.status.value} ({result.message})")


def relaxation(
    spec: ProblemSpec,
    d: int,
    use_stokes: bool,
    options: Optional[RelaxationOptions] = None,
    objective: Optional[Polynomial] = None,
) -> ConicProblem:
    """The order-d relaxation of a normalized problem, with or without Stokes rows"""
    if use_stokes:
        if objective is not None:
            raise ValueError("Stokes rows are only generated for the mass objective f = 1")
        return build_qd_stokes(spec, d, options)
    return build_qd(spec, d, objective, options)


def upper_bound(
    spec: ProblemSpec,
    d: int,
    use_stokes: bool = True,
    settings: Optional[SolverSettings] = None,
    options: Optional[RelaxationOptions] = None,
    objective: Optional[Polynomial] = None,
    backend: str = "cvxpy",
    side: str = "upper",
) -> Tuple[float, SolveResult]:
    """
    Upper bound on mu(union) at relaxation order d

    Args:
        spec: Problem (normalized on the fly)
        d: Relaxation order
        use_stokes: Add Stokes equality rows
        settings: Solver settings
        options: Relaxation options
        objective: Optional f; the value is then an upper bound on the integral of f
        backend: Solver backend name
        side: Label used in errors

    Returns:
        (value in original units, solver result)
    """
    spec = normalize(spec)
    problem = relaxation(spec, d, use_stokes, options, objective)
    result = solve(problem, settings, backend)
    if not result.status.is_success:
        raise HierarchyError(d, side, result)
    return result.primal_objective * spec.mass_rescale, result


def lower_bound(
    spec: ProblemSpec,
    d: int,
    use_stokes: bool = True,
    settings: Optional[SolverSettings] = None,
    options: Optional[RelaxationOptions] = None,
    backend: str = "cvxpy",
) -> Tuple[float, SolveResult]:
    """mu(total) minus the upper bound of the complement"""
    spec = normalize(spec)
    options = options or RelaxationOptions()
    complement = complement_union(spec, options.complement_cap)
    value, result = upper_bound(complement, d, use_stokes, settings, options, backend=backend, side="lower")
    return total_mass(spec) - value, result


def extract_moments(
    spec: ProblemSpec,
    result: SolveResult,
    d: int,
    order: int,
    stokes: bool = False,
    basis: str = "monomial",
) -> List[MomentEstimate]:
    """
    Estimates of the moments of mu restricted to the union, in original coordinates

    The moment of x^alpha in original coordinates is L applied to x^alpha composed with the
    inverse scaling, evaluated on sum_i y^i and multiplied by mass_rescale.

    Args:
        spec: The problem the result belongs to
        result: Successful upper-bound solve
        d: Relaxation order of the solve
        order: Highest total degree to report (at most 2d)
        stokes: Recorded on each estimate
        basis: Basis the relaxation was built in

    Returns:
        One MomentEstimate per exponent of degree <= order, graded-lex order
    """
    if not result.status.is_success:
        raise ValueError(f"cannot extract moments from a {result.status.value} result")
    if order > 2 * d:
        raise ValueError(f"moment order {order} exceeds 2d = {2 * d}")
    spec = normalize(spec)
    full = monomial_index(spec.n, 2 * d)
    y_total = result.y_total
    if y_total.shape != (len(full),):
        raise ValueError(f"result has {y_total.shape[0]} moments per piece, expected {len(full)} for d={d}")
    expander = get_basis(basis)
    inverse = spec.scaling.inverse()

    estimates = []
    for alpha in monomial_index(spec.n, order):
        working = Polynomial.monomial(spec.n, alpha).substitute_affine(inverse)
        value = sum(c * y_total[full.index(e)] for e, c in expander.expand(working).items())
        estimates.append(MomentEstimate(alpha=alpha, value=float(value) * spec.mass_rescale, d=d, stokes=stokes))
    return estimates


def _bonferroni(
    spec: ProblemSpec,
    d: int,
    depth_limit: int,
    use_stokes: bool,
    settings: Optional[SolverSettings],
    options: Optional[RelaxationOptions],
    backend: str,
) -> Tuple[float, float, SolveStatus]:
    spec = normalize(spec)
    options = options or RelaxationOptions()
    p = spec.union.p
    if not 1 <= depth_limit <= p:
        raise ValueError(f"Bonferroni depth must be between 1 and {p}, got {depth_limit}")
    evaluations = sum(math.comb(p, k) for k in range(1, depth_limit + 1))
    if evaluations > options.complement_cap:
        raise PieceCountError(evaluations, options.complement_cap, "Bonferroni intersection")

    upper_depth = depth_limit if depth_limit % 2 == 1 else depth_limit - 1
    lower_depth = depth_limit if depth_limit % 2 == 0 else depth_limit - 1
    worst = SolveStatus.OPTIMAL
    sums: Dict[Tuple[int, str], float] = {}

    def level_sum(k: int, kind: str) -> float:
        nonlocal worst
        key = (k, kind)
        if key not in sums:
            total = 0.0
            for basic in k_intersections(spec, k):
                single = spec.with_pieces([basic], name=basic.name)
                if kind == "upper":
                    value, result = upper_bound(single, d, use_stokes, settings, options, backend=backend)
                else:
                    value, result = lower_bound(single, d, use_stokes, settings, options, backend=backend)
                    value = max(value, 0.0)
                if result.status == SolveStatus.NEAR_OPTIMAL:
                    worst = SolveStatus.NEAR_OPTIMAL
                total += value
            sums[key] = total
        return sums[key]

    # odd truncations over-estimate, so odd terms need upper values and subtracted even terms lower ones
    upper = sum(
        (1 if k % 2 else -1) * level_sum(k, "upper" if k % 2 else "lower") for k in range(1, upper_depth + 1)
    )
    lower = sum(
        (1 if k % 2 else -1) * level_sum(k, "lower" if k % 2 else "upper") for k in range(1, lower_depth + 1)
    )
    logger.info("Bonferroni d=%d depth=%d: upper=%.10g lower=%.10g", d, depth_limit, upper, lower)
    return upper, lower, worst


def bonferroni_bounds(
    spec: ProblemSpec,
    d: int,
    depth_limit: int,
    use_stokes: bool = True,
    settings: Optional[SolverSettings] = None,
    options: Optional[RelaxationOptions] = None,
    backend: str = "cvxpy",
) -> Tuple[float, float]:
    """
    Truncated inclusion-exclusion bounds from per-intersection relaxations

    The upper bound truncates at the largest odd depth <= depth_limit, the lower bound at
    the largest even one (depth 0 gives the trivial bound 0).

    Returns:
        (upper, lower) in original units
    """
    upper, lower, _ = _bonferroni(spec, d, depth_limit, use_stokes, settings, options, backend)
    return upper, lower


def bonferroni_with_status(
    spec: ProblemSpec,
    d: int,
    depth_limit: int,
    use_stokes: bool = True,
    settings: Optional[SolverSettings] = None,
    options: Optional[RelaxationOptions] = None,
    backend: str = "cvxpy",
) -> Tuple[float, float, SolveStatus]:
    """bonferroni_bounds plus the weakest status among the sub-solves"""
    return _bonferroni(spec, d, depth_limit, use_stokes, settings, options, backend)


def relative_gap(upper: float, lower: float) -> float:
    return (upper - lower) / upper if upper else float("nan")


def dual_value(result: SolveResult, spec: ProblemSpec) -> Optional[float]:
    """Dual objective in original units, None when unavailable"""
    if not np.isfinite(result.dual_objective):
        return None
    return result.dual_objective * normalize(spec).mass_rescale

"""
cvxpy bridge for Moment Bounds
Hands a ConicProblem to any PSD-capable solver cvxpy knows about
"""

import logging
import time
from typing import Any, Dict, List, Optional

import cvxpy as cp
import numpy as np

from config import SolverSettings
from relaxation.builder import ConicProblem
from .base_backend import BaseBackend, SolveResult, SolveStatus

logger = logging.getLogger(__name__)

PREFERRED_SOLVERS = ("CLARABEL", "MOSEK", "CVXOPT", "SCS")

_STATUS_MAP = {
    cp.OPTIMAL: SolveStatus.OPTIMAL,
    cp.OPTIMAL_INACCURATE: SolveStatus.NEAR_OPTIMAL,
    cp.INFEASIBLE: SolveStatus.INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: SolveStatus.INFEASIBLE,
    cp.UNBOUNDED: SolveStatus.UNBOUNDED,
    cp.UNBOUNDED_INACCURATE: SolveStatus.UNBOUNDED,
}


def installed_psd_solvers() -> List[str]:
    installed = set(cp.installed_solvers())
    return [name for name in PREFERRED_SOLVERS if name in installed]


def solver_options(solver: str, settings: SolverSettings) -> Dict[str, Any]:
    """Translate generic settings into solver-specific keyword arguments"""
    if solver == "CLARABEL":
        return {
            "max_iter": settings.max_iter,
            "tol_gap_abs": settings.gap_tol,
            "tol_gap_rel": settings.gap_tol,
            "tol_feas": settings.feas_tol,
        }
    if solver == "SCS":
        # first-order method: iteration counts are not comparable to interior point ones
        return {"eps_abs": settings.feas_tol, "eps_rel": settings.gap_tol, "max_iters": settings.max_iter * 100}
    if solver == "CVXOPT":
        return {
            "max_iters": settings.max_iter,
            "abstol": settings.gap_tol,
            "reltol": settings.gap_tol,
            "feastol": settings.feas_tol,
        }
    if solver == "MOSEK":
        return {
            "mosek_params": {
                "MSK_DPAR_INTPNT_CO_TOL_REL_GAP": settings.gap_tol,
                "MSK_DPAR_INTPNT_CO_TOL_PFEAS": settings.feas_tol,
                "MSK_DPAR_INTPNT_CO_TOL_DFEAS": settings.feas_tol,
                "MSK_IPAR_INTPNT_MAX_ITERATIONS": settings.max_iter,
            }
        }
    return {}


class CvxpyBackend(BaseBackend):
    """Backend that models the relaxation with cvxpy and delegates to an interior point solver"""

    @property
    def name(self) -> str:
        return "cvxpy"

    @property
    def description(self) -> str:
        return f"cvxpy modelling layer; installed PSD solvers: {', '.join(installed_psd_solvers()) or 'none'}"

    def pick_solver(self, settings: SolverSettings) -> Optional[str]:
        available = installed_psd_solvers()
        if settings.solver == "auto":
            return available[0] if available else None
        requested = settings.solver.upper()
        return requested if requested in cp.installed_solvers() else None

    def solve(self, problem: ConicProblem, settings: Optional[SolverSettings] = None) -> SolveResult:
        settings = settings or SolverSettings()
        start = time.perf_counter()
        solver = self.pick_solver(settings)
        if solver is None:
            return SolveResult.failure(f"solver {settings.solver!r} is not available", solver=settings.solver)

        try:
            problem.check()
            x = cp.Variable(problem.num_variables)
            psd_constraints = []
            for block in problem.psd_blocks:
                matrix = cp.reshape(block.constant + block.coefficients @ x, (block.size, block.size), order="C")
                psd_constraints.append((matrix + matrix.T) / 2 >> 0)
            constraints = list(psd_constraints)
            eq_constraint = None
            if problem.num_equalities:
                eq_constraint = problem.eq_matrix @ x == problem.eq_rhs
                constraints.append(eq_constraint)
            model = cp.Problem(cp.Maximize(problem.objective @ x), constraints)
            model.solve(solver=solver, verbose=settings.verbose, **solver_options(solver, settings))
        except (cp.error.SolverError, ValueError, ArithmeticError) as exc:
            wall = time.perf_counter() - start
            logger.warning("Solver %s failed on %r: %s", solver, problem.label, exc)
            return SolveResult.failure(str(exc), wall, solver)
        except Exception as exc:
            # breakdowns inside cvxpy or a solver plugin
            wall = time.perf_counter() - start
            logger.exception("Solver %s broke down on %r", solver, problem.label)
            return SolveResult.failure(f"{type(exc).__name__}: {exc}", wall, solver)

        wall = time.perf_counter() - start
        status = _STATUS_MAP.get(model.status, SolveStatus.NUMERICAL_FAILURE)
        stats = model.solver_stats
        iterations = int(stats.num_iters) if stats is not None and stats.num_iters is not None else 0
        if not status.is_success or x.value is None:
            logger.info("Solve of %r ended with status %s after %.3fs", problem.label, model.status, wall)
            return SolveResult(
                status=status if status != SolveStatus.OPTIMAL else SolveStatus.NUMERICAL_FAILURE,
                primal_objective=float("nan"),
                dual_objective=float("nan"),
                y=(),
                iterations=iterations,
                wall_time=wall,
                solver=solver,
                message=f"cvxpy status {model.status}",
            )

        values = np.asarray(x.value, dtype=float)
        primal = float(problem.objective @ values)
        dual = self._dual_objective(problem, psd_constraints, eq_constraint)
        if status == SolveStatus.OPTIMAL and not abs(primal - dual) <= settings.gap_tol * (1.0 + abs(primal)):
            logger.info("Recomputed duality gap of %r is %.3e; reporting near_optimal", problem.label, abs(primal - dual))
            status = SolveStatus.NEAR_OPTIMAL
        pieces = tuple(values[problem.piece_slice(i)].copy() for i in range(problem.n_pieces))
        logger.info(
            "Solved %r with %s: status=%s objective=%.10g in %.3fs", problem.label, solver, status.value, primal, wall
        )
        return SolveResult(
            status=status,
            primal_objective=primal,
            dual_objective=dual,
            y=pieces,
            iterations=iterations,
            wall_time=wall,
            solver=solver,
            message=f"cvxpy status {model.status}",
        )

    @staticmethod
    def _dual_objective(problem: ConicProblem, psd_constraints, eq_constraint) -> float:
        """sum_j <Z_j, C_j> + nu^T e from the backend's dual variables"""
        total = 0.0
        for block, constraint in zip(problem.psd_blocks, psd_constraints):
            dual = constraint.dual_value
            if dual is None:
                return float("nan")
            z = np.asarray(dual, dtype=float).reshape(block.size, block.size)
            total += float(np.sum(z * block.constant.reshape(block.size, block.size)))
        if eq_constraint is not None:
            nu = eq_constraint.dual_value
            if nu is None:
                return float("nan")
            total += float(np.asarray(nu, dtype=float) @ problem.eq_rhs)
        return total

"""
Executor Stage for Moment Bounds
Runs planned relaxation jobs on a bounded worker pool, retrying failed solves
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Optional

from config import RelaxationOptions, SolverSettings
from geometry.problem import PieceCountError, ProblemSpec, complement_union, normalize, total_mass
from relaxation.builder import DegreeTooSmallError
from solvers.base_backend import SolveStatus
from .base_stage import BaseStage
from .bounds import HierarchyError, bonferroni_with_status, dual_value, lower_bound, upper_bound

logger = logging.getLogger(__name__)


class ExecutorStage(BaseStage):
    """Stage responsible for solving the planned relaxations"""

    MAX_RETRIES = 3

    def __init__(
        self,
        spec: ProblemSpec,
        settings: Optional[SolverSettings] = None,
        options: Optional[RelaxationOptions] = None,
        workers: int = 1,
        backend: str = "cvxpy",
    ):
        """
        Initialize Executor Stage

        Args:
            spec: Problem being bounded
            settings: Base solver settings; retries loosen them
            options: Relaxation options
            workers: Size of the thread pool
            backend: Solver backend name
        """
        super().__init__(normalize(spec))
        self.settings = settings or SolverSettings()
        self.options = options or RelaxationOptions()
        self.workers = max(1, workers)
        self.backend = backend

    @property
    def name(self) -> str:
        return "Executor"

    @property
    def role(self) -> str:
        return "Builds and solves each planned relaxation, retrying with looser tolerances"

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute the plan jobs

        Args:
            input_data: Dict containing 'plan' with jobs to execute

        Returns:
            Dict containing:
                - success: bool
                - results: List of job results, in plan order
                - error: Optional error message
        """
        plan = input_data.get("plan") or {}
        jobs = plan.get("jobs", [])

        if not jobs:
            return {"success": False, "results": [], "error": "No jobs to execute"}

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(self._execute_job, jobs))

        # Continue past failed jobs; the report marks them
        all_successful = all(result["success"] for result in results)
        return {
            "success": all_successful,
            "results": results,
            "error": None if all_successful else "Some jobs failed",
        }

    def _run(self, job: Dict[str, Any], settings: SolverSettings) -> Dict[str, Any]:
        d, side, stokes = job["d"], job["side"], job["stokes"]
        if side == "upper":
            value, result = upper_bound(self.spec, d, stokes, settings, self.options, backend=self.backend)
            return {"value": value, "status": result.status, "result": result, "dual": dual_value(result, self.spec)}
        if side == "lower":
            value, result = lower_bound(self.spec, d, stokes, settings, self.options, backend=self.backend)
            complement_dual = dual_value(result, complement_union(self.spec, self.options.complement_cap))
            dual = None if complement_dual is None else total_mass(self.spec) - complement_dual
            return {"value": value, "status": result.status, "result": result, "dual": dual}
        if side == "bonferroni":
            upper, lower, status = bonferroni_with_status(
                self.spec, d, job["bonferroni_depth"], stokes, settings, self.options, backend=self.backend
            )
            return {"value": upper, "lower_value": lower, "status": status, "result": None, "dual": None}
        raise ValueError(f"Unknown side: {side}")

    def _execute_job(self, job: Dict[str, Any]) -> Dict[str, Any]:
        """Execute a single job with retry logic"""
        base = {
            "job_number": job.get("job_number", "?"),
            "d": job["d"],
            "side": job["side"],
            "stokes": job["stokes"],
        }
        last_error = None
        last_status = SolveStatus.NUMERICAL_FAILURE
        start = time.perf_counter()

        for attempt in range(1, self.MAX_RETRIES + 1):
            settings = self.settings if attempt == 1 else self.settings.loosened(10.0 ** (attempt - 1))
            try:
                data = self._run(job, settings)
                status = data["status"] if attempt == 1 else SolveStatus.NEAR_OPTIMAL
                return {
                    **base,
                    "success": True,
                    "data": {**data, "status": status},
                    "attempts": attempt,
                    "wall_ms": (time.perf_counter() - start) * 1000.0,
                    "error": None,
                }
            except HierarchyError as exc:
                last_error = str(exc)
                last_status = exc.result.status
            except (DegreeTooSmallError, PieceCountError, ValueError) as exc:
                # configuration errors are not retried
                last_error = str(exc)
                break
            except Exception as exc:
                logger.exception("Job %s (d=%d, %s) broke down", base["job_number"], job["d"], job["side"])
                last_error = f"{type(exc).__name__}: {exc}"
                break

            if attempt < self.MAX_RETRIES:
                logger.warning(
                    "Retry %d/%d for job %s (d=%d, %s): %s",
                    attempt,
                    self.MAX_RETRIES,
                    base["job_number"],
                    job["d"],
                    job["side"],
                    last_error,
                )

        return {
            **base,
            "success": False,
            "data": {"status": last_status},
            "attempts": attempt,
            "wall_ms": (time.perf_counter() - start) * 1000.0,
            "error": f"Failed after {attempt} attempts: {last_error}",
        }

"""
Planner Stage for Moment Bounds
Turns a sweep request into an ordered list of (d, side, stokes) jobs
"""

from typing import Any, Dict, List, Optional

from config import RelaxationOptions
from geometry.problem import complement_union, normalize
from relaxation.builder import minimum_order
from .base_stage import BaseStage


class PlannerStage(BaseStage):
    """Stage responsible for planning the relaxation jobs of a sweep"""

    VALID_SIDES = ("upper", "lower", "bonferroni")

    @property
    def name(self) -> str:
        return "Planner"

    @property
    def role(self) -> str:
        return "Enumerates one job per degree, side and Stokes mode and checks the degree range"

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Create the job plan

        Args:
            input_data: Dict containing d_min, d_max, stokes_modes (tuple of bool),
                sides (tuple of "upper" | "lower") and optional bonferroni_depth

        Returns:
            Dict containing:
                - success: bool
                - plan: {"jobs": [...], "d0": int}
                - error: Optional error message
        """
        d_min = input_data.get("d_min", 1)
        d_max = input_data.get("d_max", d_min)
        stokes_modes = tuple(input_data.get("stokes_modes", (True,)))
        sides = tuple(input_data.get("sides", ("upper", "lower")))
        depth = input_data.get("bonferroni_depth")
        if depth:
            sides = sides + ("bonferroni",)

        jobs: List[Dict[str, Any]] = []
        for d in range(d_min, d_max + 1):
            for side in sides:
                for stokes in stokes_modes:
                    jobs.append(
                        {
                            "job_number": len(jobs) + 1,
                            "d": d,
                            "side": side,
                            "stokes": stokes,
                            "bonferroni_depth": depth if side == "bonferroni" else None,
                        }
                    )
        try:
            d0 = self._minimum_order(sides, input_data.get("options"))
        except ValueError as exc:
            return {"success": False, "plan": None, "error": str(exc)}
        plan = {"jobs": jobs, "d0": d0}
        validation = self._validate_plan(plan, d_min, d_max, sides, depth)
        if not validation["valid"]:
            return {"success": False, "plan": None, "error": validation["error"]}
        return {"success": True, "plan": plan, "error": None}

    def _minimum_order(self, sides, options) -> int:
        spec = normalize(self.spec)
        d0 = minimum_order(spec)
        if "lower" in sides:
            options = options or RelaxationOptions()
            d0 = max(d0, minimum_order(complement_union(spec, options.complement_cap)))
        return d0

    def _validate_plan(
        self, plan: Dict[str, Any], d_min: int, d_max: int, sides, depth: Optional[int] = None
    ) -> Dict[str, Any]:
        """Validate the plan structure"""
        if d_min > d_max:
            return {"valid": False, "error": f"Empty degree range {d_min}..{d_max}"}
        if depth is not None and not 1 <= depth <= self.spec.union.p:
            return {"valid": False, "error": f"Bonferroni depth {depth} is outside 1..{self.spec.union.p}"}
        if d_min < plan["d0"]:
            return {"valid": False, "error": f"d_min={d_min} is below the minimum relaxation order {plan['d0']}"}
        for side in sides:
            if side not in self.VALID_SIDES:
                return {"valid": False, "error": f"Unknown side: {side}"}
        if not plan["jobs"]:
            return {"valid": False, "error": "Plan has no jobs"}
        return {"valid": True, "error": None}

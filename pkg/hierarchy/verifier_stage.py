"""
Verifier Stage for Moment Bounds
Validates job results and assembles the BoundsReport
"""

from typing import Any, Dict, List, Optional

from geometry.problem import ProblemSpec
from .base_stage import BaseStage
from .bounds import extract_moments
from .report import LOWER_SIDES, UPPER_SIDES, BoundsReport, ReportRow

MONOTONE_SLACK = 1e-6


class VerifierStage(BaseStage):
    """Stage responsible for checking results and formatting the report"""

    def __init__(self, spec: ProblemSpec, moment_order: Optional[int] = None, basis: str = "monomial"):
        """
        Initialize Verifier Stage

        Args:
            spec: Problem being bounded
            moment_order: Highest moment degree to extract from upper-bound solves (None: none)
            basis: Basis the relaxations were built in
        """
        super().__init__(spec)
        self.moment_order = moment_order
        self.basis = basis

    @property
    def name(self) -> str:
        return "Verifier"

    @property
    def role(self) -> str:
        return "Checks monotonicity and the sandwich property, then assembles the report"

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Verify and format job results

        Args:
            input_data: Dict containing:
                - plan: The job plan
                - results: Results from the executor

        Returns:
            Dict containing:
                - success: bool (every job succeeded)
                - report: BoundsReport
                - issues: List of issue strings
                - error: Optional error message
        """
        results = input_data.get("results", [])
        report = BoundsReport(
            problem=self.spec.name,
            dimension=self.spec.n,
            measure=self.spec.measure.kind,
            mass_rescale=self.spec.mass_rescale,
            reference_value=self.spec.reference_value,
        )
        for result in results:
            report.rows.extend(self._rows_for(result))
            report.moments.extend(self._moments_for(result))
        report.rows = report.sorted_rows()
        report.fill_gaps()

        analysis = self._analyze_completeness(results)
        issues = analysis["issues"] + self._check_monotone(report) + self._check_sandwich(report)
        report.issues = issues
        return {
            "success": analysis["complete"],
            "report": report,
            "issues": issues,
            "error": None if analysis["complete"] else "Some rows failed",
        }

    def _rows_for(self, result: Dict[str, Any]) -> List[ReportRow]:
        data = result.get("data") or {}
        status = data.get("status")
        status = status.value if hasattr(status, "value") else str(status or "numerical_failure")
        common = {
            "d": result["d"],
            "stokes": result["stokes"],
            "status": status,
            "wall_ms": result.get("wall_ms", 0.0),
            "message": result.get("error") or "",
        }
        if result["side"] == "bonferroni":
            return [
                ReportRow(side="bonferroni_upper", value=data.get("value"), **common),
                ReportRow(side="bonferroni_lower", value=data.get("lower_value"), **common),
            ]
        return [ReportRow(side=result["side"], value=data.get("value"), dual_value=data.get("dual"), **common)]

    def _moments_for(self, result: Dict[str, Any]):
        if self.moment_order is None or result["side"] != "upper" or not result["success"]:
            return []
        solve_result = result["data"].get("result")
        if solve_result is None:
            return []
        order = min(self.moment_order, 2 * result["d"])
        return extract_moments(self.spec, solve_result, result["d"], order, result["stokes"], self.basis)

    def _analyze_completeness(self, results: List[Dict[str, Any]]) -> Dict[str, Any]:
        """Analyze if execution results are complete"""
        issues = []
        successful = 0
        for result in results:
            if result.get("success"):
                successful += 1
            else:
                issues.append(f"job {result.get('job_number')} (d={result['d']}, {result['side']}): {result.get('error')}")
        return {
            "complete": successful == len(results),
            "successful_jobs": successful,
            "total_jobs": len(results),
            "success_rate": (successful / len(results) * 100) if results else 0,
            "issues": issues,
        }

    def _check_monotone(self, report: BoundsReport) -> List[str]:
        issues = []
        for stokes in (False, True):
            for side in UPPER_SIDES + LOWER_SIDES:
                series = report.series(side, stokes)
                for (d_prev, prev), (d_next, nxt) in zip(series, series[1:]):
                    worse = nxt > prev + MONOTONE_SLACK if side in UPPER_SIDES else nxt < prev - MONOTONE_SLACK
                    if worse:
                        issues.append(
                            f"{side} (stokes={stokes}) not monotone between d={d_prev} ({prev:.8g}) and d={d_next} ({nxt:.8g})"
                        )
        return issues

    def _check_sandwich(self, report: BoundsReport) -> List[str]:
        issues = []
        for upper_side, lower_side in zip(UPPER_SIDES, LOWER_SIDES):
            for upper in report.rows:
                if upper.side != upper_side or not upper.ok:
                    continue
                lower = report.row(upper.d, lower_side, upper.stokes)
                if lower is not None and lower.ok and lower.value > upper.value + MONOTONE_SLACK:
                    issues.append(
                        f"{lower_side} {lower.value:.8g} exceeds {upper_side} {upper.value:.8g} at d={upper.d}"
                    )
        return issues

"""
Base Backend class for Moment Bounds
All conic solver bridges must inherit from this base class
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config import SolverSettings
from relaxation.builder import ConicProblem


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    NEAR_OPTIMAL = "near_optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"

    @property
    def is_success(self) -> bool:
        return self in (SolveStatus.OPTIMAL, SolveStatus.NEAR_OPTIMAL)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one conic solve"""

    status: SolveStatus
    primal_objective: float
    dual_objective: float
    y: Tuple[np.ndarray, ...]
    iterations: int
    wall_time: float
    solver: str = ""
    message: str = ""

    @classmethod
    def failure(cls, message: str, wall_time: float = 0.0, solver: str = "") -> "SolveResult":
        return cls(
            status=SolveStatus.NUMERICAL_FAILURE,
            primal_objective=float("nan"),
            dual_objective=float("nan"),
            y=(),
            iterations=0,
            wall_time=wall_time,
            solver=solver,
            message=message,
        )

    @property
    def y_total(self) -> np.ndarray:
        """sum_i y^i"""
        return np.sum(self.y, axis=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "solver": self.solver,
            "message": self.message,
        }


class BaseBackend(ABC):
    """Abstract base class for conic solver bridges"""

    @property
    @abstractmethod
    def name(self) -> str:
        """Backend identifier"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def solve(self, problem: ConicProblem, settings: Optional[SolverSettings] = None) -> SolveResult:
        """
        Solve a maximization ConicProblem

        Args:
            problem: Assembled relaxation
            settings: Termination settings

        Returns:
            SolveResult; numerical breakdowns are reported through the status, never raised
        """
        pass

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "description": self.description}

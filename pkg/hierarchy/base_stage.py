"""
Base Stage class for Moment Bounds
All sweep pipeline stages must inherit from this base class
"""

from abc import ABC, abstractmethod
from typing import Any, Dict

from geometry.problem import ProblemSpec


class BaseStage(ABC):
    """Abstract base class for all pipeline stages"""

    def __init__(self, spec: ProblemSpec):
        """
        Initialize stage with the problem it works on

        Args:
            spec: Problem being bounded
        """
        self.spec = spec

    @property
    @abstractmethod
    def name(self) -> str:
        """Stage name identifier"""
        pass

    @property
    @abstractmethod
    def role(self) -> str:
        """Stage role description"""
        pass

    @abstractmethod
    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Process input and return result

        Args:
            input_data: Input data for the stage

        Returns:
            Result dictionary with at least `success` and `error`
        """
        pass

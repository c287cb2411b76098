"""
Base Measure class for Moment Bounds
All reference measures must inherit from this base class
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.monomials import monomial_index
from algebra.polynomial import Exponent, Polynomial

MEASURE_KINDS = ("lebesgue", "gaussian", "exponential")


@dataclass(frozen=True)
class MeasureSpec:
    """Declarative description of the reference measure"""

    kind: str
    box: Optional[Tuple[Tuple[float, float], ...]] = None
    sigma2: Optional[float] = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}; expected one of {MEASURE_KINDS}")
        if self.kind == "gaussian" and (self.sigma2 is None or not self.sigma2 > 0):
            raise ValueError(f"gaussian measure needs sigma2 > 0, got {self.sigma2}")
        if self.box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.box)
            for k, (lo, hi) in enumerate(box):
                if not lo < hi:
                    raise ValueError(f"box interval {k} is degenerate: [{lo}, {hi}]")
            object.__setattr__(self, "box", box)


@dataclass(frozen=True)
class MomentVector:
    """Moments z_alpha of a measure for all |alpha| <= degree, in graded-lex order"""

    n: int
    degree: int
    values: np.ndarray

    def __post_init__(self):
        expected = len(monomial_index(self.n, self.degree))
        if self.values.shape != (expected,):
            raise ValueError(f"expected {expected} moments, got shape {self.values.shape}")

    def __getitem__(self, alpha: Sequence[int]) -> float:
        return float(self.values[monomial_index(self.n, self.degree).index(alpha)])

    def as_dict(self) -> Dict[Exponent, float]:
        return dict(zip(monomial_index(self.n, self.degree), self.values.tolist()))


def product_moments(axis_moments: Sequence[np.ndarray], degree: int) -> MomentVector:
    """Combine per-axis 1-D moments of a product measure into a MomentVector"""
    n = len(axis_moments)
    exponents = monomial_index(n, degree).exponents
    values = np.array(
        [math.prod(float(axis_moments[k][a]) for k, a in enumerate(alpha)) for alpha in exponents]
    )
    return MomentVector(n, degree, values)


class BaseMeasure(ABC):
    """Abstract base class for product reference measures on R^n"""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"dimension must be at least 1, got {n}")
        self.n = n

    @property
    @abstractmethod
    def name(self) -> str:
        """Measure kind"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """Human readable description"""
        pass

    @abstractmethod
    def axis_moments(self, axis: int, max_degree: int) -> np.ndarray:
        """
        One-dimensional moments of the factor acting on one coordinate

        Args:
            axis: Coordinate index
            max_degree: Highest power needed

        Returns:
            Array m with m[a] = integral of t^a for a = 0..max_degree
        """
        pass

    @abstractmethod
    def density_factors(self) -> Tuple[Polynomial, Polynomial]:
        """Polynomials (q, r) with density q(x) * exp(r(x)) on the support"""
        pass

    @abstractmethod
    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw `count` points of shape (count, n) from the normalized measure"""
        pass

    def support_constraints(self) -> List[Polynomial]:
        """Polynomial inequalities describing the support, added to every relaxation piece"""
        return []

    def moments(self, degree: int) -> MomentVector:
        return product_moments([self.axis_moments(k, degree) for k in range(self.n)], degree)

    def total_mass(self) -> float:
        return math.prod(float(self.axis_moments(k, 0)[0]) for k in range(self.n))

    def to_dict(self) -> Dict[str, Any]:
        """Convert measure to dictionary representation"""
        return {
            "name": self.name,
            "description": self.description,
            "dimension": self.n,
            "total_mass": self.total_mass(),
        }

"""
Lebesgue measure on a box for Moment Bounds
"""

from typing import Sequence, Tuple

import numpy as np

from algebra.polynomial import Polynomial
from .base_measure import BaseMeasure, MomentVector, product_moments


def interval_moments(lo: float, hi: float, max_degree: int) -> np.ndarray:
    """Moments of Lebesgue measure on [lo, hi]: (hi^(a+1) - lo^(a+1)) / (a+1)"""
    return np.array([(hi ** (a + 1) - lo ** (a + 1)) / (a + 1) for a in range(max_degree + 1)])


def lebesgue_moments(box: Sequence[Tuple[float, float]], degree: int) -> MomentVector:
    """
    Moment vector of Lebesgue measure restricted to a box

    Args:
        box: One (lo, hi) interval per coordinate
        degree: Highest total degree 2d

    Returns:
        MomentVector with z_alpha = prod_k (hi_k^(a_k+1) - lo_k^(a_k+1)) / (a_k+1)
    """
    return LebesgueMeasure(box).moments(degree)


class LebesgueMeasure(BaseMeasure):
    """Lebesgue measure on an axis-aligned box"""

    def __init__(self, box: Sequence[Tuple[float, float]]):
        super().__init__(len(box))
        self.box = tuple((float(lo), float(hi)) for lo, hi in box)
        for k, (lo, hi) in enumerate(self.box):
            if not lo < hi:
                raise ValueError(f"box interval {k} is degenerate: [{lo}, {hi}]")

    @property
    def name(self) -> str:
        return "lebesgue"

    @property
    def description(self) -> str:
        return "Lebesgue measure on an axis-aligned box"

    def axis_moments(self, axis: int, max_degree: int) -> np.ndarray:
        lo, hi = self.box[axis]
        return interval_moments(lo, hi, max_degree)

    def density_factors(self) -> Tuple[Polynomial, Polynomial]:
        return Polynomial.constant(self.n, 1.0), Polynomial.zero(self.n)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.array([interval[0] for interval in self.box])
        hi = np.array([interval[1] for interval in self.box])
        return rng.uniform(lo, hi, size=(count, self.n))

    def to_dict(self):
        info = super().to_dict()
        info["box"] = [list(interval) for interval in self.box]
        return info

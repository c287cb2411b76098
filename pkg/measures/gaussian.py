"""
Gaussian measure for Moment Bounds
dmu = exp(-||x||^2 / sigma2) dx on R^n, not normalized to a probability
"""

import math
from typing import Tuple

import numpy as np

from algebra.polynomial import Polynomial
from .base_measure import BaseMeasure, MomentVector, product_moments


def gaussian_axis_moments(sigma2: float, max_degree: int) -> np.ndarray:
    """
    1-D moments of exp(-t^2 / sigma2) dt

    m(0) = sqrt(pi * sigma2), m(2j) = m(2j - 2) * sigma2 * (2j - 1) / 2, odd moments vanish.
    """
    moments = np.zeros(max_degree + 1)
    moments[0] = math.sqrt(math.pi * sigma2)
    for a in range(2, max_degree + 1, 2):
        moments[a] = moments[a - 2] * sigma2 * (a - 1) / 2.0
    return moments


def gaussian_moments(sigma2: float, n: int, degree: int) -> MomentVector:
    return GaussianMeasure(n, sigma2).moments(degree)


class GaussianMeasure(BaseMeasure):
    """Unnormalized Gaussian weight exp(-||x||^2 / sigma2)"""

    def __init__(self, n: int, sigma2: float):
        super().__init__(n)
        if not sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {sigma2}")
        self.sigma2 = float(sigma2)

    @property
    def name(self) -> str:
        return "gaussian"

    @property
    def description(self) -> str:
        return "Gaussian weight exp(-||x||^2 / sigma2) on R^n"

    def axis_moments(self, axis: int, max_degree: int) -> np.ndarray:
        return gaussian_axis_moments(self.sigma2, max_degree)

    def density_factors(self) -> Tuple[Polynomial, Polynomial]:
        r = Polynomial.zero(self.n)
        for k in range(self.n):
            r = r - Polynomial.variable(self.n, k) ** 2
        return Polynomial.constant(self.n, 1.0), r.scaled(1.0 / self.sigma2)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Box-Muller draws with per-coordinate variance sigma2 / 2"""
        total = count * self.n
        pairs = (total + 1) // 2
        u1 = rng.random(pairs)
        u2 = rng.random(pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        angle = 2.0 * math.pi * u2
        normals = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:total]
        return normals.reshape(count, self.n) * math.sqrt(self.sigma2 / 2.0)

    def to_dict(self):
        info = super().to_dict()
        info["sigma2"] = self.sigma2
        return info

"""
Exponential measure for Moment Bounds
dmu = exp(-sum x_k) dx on the positive orthant
"""

import math
from typing import List, Tuple

import numpy as np

from algebra.polynomial import Polynomial
from .base_measure import BaseMeasure, MomentVector


def exponential_moments(n: int, degree: int) -> MomentVector:
    """z_alpha = prod_k alpha_k!"""
    return ExponentialMeasure(n).moments(degree)


class ExponentialMeasure(BaseMeasure):
    """Product of unit exponential densities on R^n_+"""

    @property
    def name(self) -> str:
        return "exponential"

    @property
    def description(self) -> str:
        return "Exponential weight exp(-sum x_k) on the positive orthant"

    def axis_moments(self, axis: int, max_degree: int) -> np.ndarray:
        return np.array([float(math.factorial(a)) for a in range(max_degree + 1)])

    def density_factors(self) -> Tuple[Polynomial, Polynomial]:
        r = Polynomial.zero(self.n)
        for k in range(self.n):
            r = r - Polynomial.variable(self.n, k)
        return Polynomial.constant(self.n, 1.0), r

    def support_constraints(self) -> List[Polynomial]:
        # x_k >= 0
        return [Polynomial.variable(self.n, k) for k in range(self.n)]

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.standard_exponential(size=(count, self.n))

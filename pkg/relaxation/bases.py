"""
Polynomial bases for Moment Bounds
Pseudo-moment vectors are indexed by graded-lex exponents; the basis decides what
y_alpha means (the moment of x^alpha or of a tensor Chebyshev polynomial T_alpha)
"""

from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Any, Dict, List, Tuple

import numpy as np
from numpy.polynomial import chebyshev

from algebra.monomials import monomial_index
from algebra.polynomial import Exponent, Polynomial
from measures.base_measure import BaseMeasure

Expansion = Dict[Exponent, float]


class BaseBasis(ABC):
    """Abstract base class for tensor-product polynomial bases"""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def product_1d(self, a: int, b: int) -> Tuple[Tuple[int, float], ...]:
        """b_a * b_b expanded in the same 1-D basis"""
        pass

    @abstractmethod
    def power_1d(self, power: int) -> Tuple[Tuple[int, float], ...]:
        """t^power expanded in the 1-D basis"""
        pass

    @abstractmethod
    def axis_transform(self, max_degree: int) -> np.ndarray:
        """Matrix T with b_k(t) = sum_j T[k, j] t^j for k, j <= max_degree"""
        pass

    def product(self, alpha: Exponent, beta: Exponent) -> Expansion:
        """Tensor product b_alpha * b_beta expanded in the basis"""
        out: Expansion = {(): 1.0}
        for a, b in zip(alpha, beta):
            factors = self.product_1d(a, b)
            grown: Expansion = {}
            for prefix, value in out.items():
                for k, c in factors:
                    key = prefix + (k,)
                    grown[key] = grown.get(key, 0.0) + value * c
            out = grown
        return out

    def expand(self, polynomial: Polynomial) -> Expansion:
        """Coefficients of a polynomial in the basis (exact zeros dropped)"""
        out: Expansion = {}
        for exponent, coeff in polynomial.terms.items():
            partial: Expansion = {(): coeff}
            for power in exponent:
                factors = self.power_1d(power)
                grown: Expansion = {}
                for prefix, value in partial.items():
                    for k, c in factors:
                        key = prefix + (k,)
                        grown[key] = grown.get(key, 0.0) + value * c
                partial = grown
            for key, value in partial.items():
                out[key] = out.get(key, 0.0) + value
        return {key: value for key, value in out.items() if value != 0.0}

    def reference_moments(self, measure: BaseMeasure, degree: int) -> np.ndarray:
        """
        L_z(b_alpha) for the reference measure, aligned with monomial_index(n, degree)

        Every supported measure is a product measure, so per-axis basis moments
        T @ m_axis are multiplied together.
        """
        transform = self.axis_transform(degree)
        axes = [transform @ measure.axis_moments(k, degree) for k in range(measure.n)]
        exponents = monomial_index(measure.n, degree).exponents
        return np.array([np.prod([axes[k][a] for k, a in enumerate(alpha)]) for alpha in exponents])

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "description": self.description}


class MonomialBasis(BaseBasis):
    """Plain monomials x^alpha"""

    @property
    def name(self) -> str:
        return "monomial"

    @property
    def description(self) -> str:
        return "Monomials x^alpha in graded-lex order"

    def product_1d(self, a, b):
        return ((a + b, 1.0),)

    def power_1d(self, power):
        return ((power, 1.0),)

    def axis_transform(self, max_degree):
        return np.eye(max_degree + 1)

    def product(self, alpha, beta):
        return {tuple(a + b for a, b in zip(alpha, beta)): 1.0}

    def expand(self, polynomial):
        return dict(polynomial.terms)


@lru_cache(maxsize=None)
def _chebyshev_power(power: int) -> Tuple[Tuple[int, float], ...]:
    unit = np.zeros(power + 1)
    unit[power] = 1.0
    coeffs = chebyshev.poly2cheb(unit)
    return tuple((k, float(c)) for k, c in enumerate(coeffs) if c != 0.0)


@lru_cache(maxsize=None)
def _chebyshev_transform(max_degree: int) -> np.ndarray:
    transform = np.zeros((max_degree + 1, max_degree + 1))
    for k in range(max_degree + 1):
        unit = np.zeros(k + 1)
        unit[k] = 1.0
        coeffs = chebyshev.cheb2poly(unit)
        transform[k, : len(coeffs)] = coeffs
    transform.setflags(write=False)
    return transform


class ChebyshevBasis(BaseBasis):
    """Tensor Chebyshev polynomials T_alpha(x) = prod_k T_{alpha_k}(x_k)"""

    @property
    def name(self) -> str:
        return "chebyshev"

    @property
    def description(self) -> str:
        return "Tensor Chebyshev polynomials of the first kind; better conditioned on [-1, 1]^n"

    def product_1d(self, a, b):
        # T_a T_b = (T_{a+b} + T_{|a-b|}) / 2
        if a == 0 or b == 0:
            return ((a + b, 1.0),)
        if a == b:
            return ((2 * a, 0.5), (0, 0.5))
        return ((a + b, 0.5), (abs(a - b), 0.5))

    def power_1d(self, power):
        return _chebyshev_power(power)

    def axis_transform(self, max_degree):
        return _chebyshev_transform(max_degree)


_BASES = {"monomial": MonomialBasis, "chebyshev": ChebyshevBasis}


def get_basis(name: str) -> BaseBasis:
    try:
        return _BASES[name]()
    except KeyError:
        raise ValueError(f"unknown basis {name!r}; expected one of {sorted(_BASES)}") from None


def available_bases() -> List[Dict[str, Any]]:
    return [cls().to_dict() for cls in _BASES.values()]

"""
Measure registry for Moment Bounds
Maps a MeasureSpec to its concrete BaseMeasure plugin
"""

from typing import Dict, List, Tuple

from algebra.polynomial import Polynomial
from .base_measure import BaseMeasure, MeasureSpec
from .exponential import ExponentialMeasure
from .gaussian import GaussianMeasure
from .lebesgue import LebesgueMeasure

MEASURE_DESCRIPTIONS: Dict[str, str] = {
    "lebesgue": "Lebesgue measure on an axis-aligned box (needs `box`)",
    "gaussian": "Gaussian weight exp(-||x||^2 / sigma2) on R^n (needs `sigma2`)",
    "exponential": "Exponential weight exp(-sum x_k) on the positive orthant",
}


def build_measure(spec: MeasureSpec, n: int) -> BaseMeasure:
    """
    Instantiate the measure plugin described by a MeasureSpec

    Args:
        spec: Measure description
        n: Ambient dimension

    Returns:
        Concrete BaseMeasure
    """
    if spec.kind == "lebesgue":
        if spec.box is None:
            raise ValueError("lebesgue measure requires a box")
        if len(spec.box) != n:
            raise ValueError(f"box has {len(spec.box)} intervals for dimension {n}")
        return LebesgueMeasure(spec.box)
    if spec.kind == "gaussian":
        return GaussianMeasure(n, spec.sigma2)
    if spec.kind == "exponential":
        return ExponentialMeasure(n)
    raise ValueError(f"unknown measure kind {spec.kind!r}")


def density_factors(spec: MeasureSpec, n: int) -> Tuple[Polynomial, Polynomial]:
    """(q, r) such that the density is q * exp(r) on the support"""
    return build_measure(spec, n).density_factors()


def available_measures() -> List[Dict[str, str]]:
    return [{"name": name, "description": text} for name, text in MEASURE_DESCRIPTIONS.items()]

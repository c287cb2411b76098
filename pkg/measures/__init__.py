from .base_measure import MEASURE_KINDS, BaseMeasure, MeasureSpec, MomentVector, product_moments
from .exponential import ExponentialMeasure, exponential_moments
from .gaussian import GaussianMeasure, gaussian_axis_moments, gaussian_moments
from .lebesgue import LebesgueMeasure, interval_moments, lebesgue_moments
from .registry import available_measures, build_measure, density_factors

__all__ = [
    "MEASURE_KINDS",
    "BaseMeasure",
    "ExponentialMeasure",
    "GaussianMeasure",
    "LebesgueMeasure",
    "MeasureSpec",
    "MomentVector",
    "available_measures",
    "build_measure",
    "density_factors",
    "exponential_moments",
    "gaussian_axis_moments",
    "gaussian_moments",
    "interval_moments",
    "lebesgue_moments",
    "product_moments",
]

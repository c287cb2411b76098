from .estimator import MIN_SAMPLES, McEstimate, estimate

__all__ = ["MIN_SAMPLES", "McEstimate", "estimate"]

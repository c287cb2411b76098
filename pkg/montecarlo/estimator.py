"""
Monte Carlo oracle for Moment Bounds
Hit-or-miss estimate of mu(union) with a normal-approximation confidence interval
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np
from scipy.stats import norm

from geometry.problem import ProblemSpec, normalize
from measures.registry import build_measure

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100
DEFAULT_CHUNK = 200_000


@dataclass(frozen=True)
class McEstimate:
    samples: int
    hits: int
    estimate: float
    std_error: float
    ci_low: float
    ci_high: float
    seed: int
    confidence: float
    mass_total: float
    shards: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _shard_sizes(samples: int, shards: int) -> List[int]:
    base, extra = divmod(samples, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def _count_hits(spec: ProblemSpec, rng: np.random.Generator, count: int, chunk: int) -> int:
    measure = build_measure(spec.measure, spec.n)
    hits = 0
    remaining = count
    while remaining > 0:
        size = min(chunk, remaining)
        points = measure.sample(rng, size)
        hits += int(np.count_nonzero(spec.union.contains(points)))
        remaining -= size
    return hits


def estimate(
    spec: ProblemSpec,
    samples: int,
    seed: int = 0,
    shards: int = 1,
    confidence: float = 0.99,
    chunk: int = DEFAULT_CHUNK,
) -> McEstimate:
    """
    Estimate mu(union) by sampling the normalized reference measure

    Args:
        spec: Problem (normalized internally; sampling happens in working coordinates)
        samples: Total number of points N (at least 100)
        seed: Root seed; shard streams are spawned from it
        shards: Number of independent streams
        confidence: Two-sided confidence level of the interval
        chunk: Points evaluated per batch

    Returns:
        McEstimate in original measure units
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} samples are required, got {samples}")
    if shards < 1:
        raise ValueError(f"shards must be positive, got {shards}")
    spec = normalize(spec)
    mass_total = build_measure(spec.measure, spec.n).total_mass() * spec.mass_rescale

    streams = np.random.SeedSequence(seed).spawn(shards)
    hits = sum(
        _count_hits(spec, np.random.default_rng(stream), size, chunk)
        for stream, size in zip(streams, _shard_sizes(samples, shards))
    )
    fraction = hits / samples
    value = mass_total * fraction
    std_error = mass_total * math.sqrt(fraction * (1.0 - fraction) / samples)
    z = float(norm.ppf(0.5 + confidence / 2.0))
    logger.info("Monte Carlo %r: %d/%d hits, estimate %.6g +/- %.2g", spec.name, hits, samples, value, std_error)
    return McEstimate(
        samples=samples,
        hits=hits,
        estimate=value,
        std_error=std_error,
        ci_low=value - z * std_error,
        ci_high=value + z * std_error,
        seed=seed,
        confidence=confidence,
        mass_total=mass_total,
        shards=shards,
    )

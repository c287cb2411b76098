"""Slow end-to-end checks: published bound values, and the bound invariants on every shipped problem"""

from functools import lru_cache
from pathlib import Path

import pytest

from geometry import load_problem
from hierarchy import sweep
from main import sandwich_violations
from montecarlo import estimate

pytestmark = [pytest.mark.slow, pytest.mark.solver]

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
PROBLEM_FILES = sorted(p.name for p in PROBLEMS.glob("*.prob"))
SLACK = 1e-6

# (file, d, upper, lower, upper with Stokes, lower with Stokes, tolerance)
REFERENCE_ROWS = [
    ("two_ellipses_gauss_u00", 10, 1.9649, 1.6129, 1.8571, 1.7948, 0.015),
    ("two_ellipses_gauss_u0105", 10, 1.9554, 1.5752, 1.8308, 1.7746, 0.015),
    ("two_ellipses_gauss_u0505", 10, 1.9484, 1.5369, 1.8156, 1.7618, 0.015),
    ("noncompact_gauss", 9, 2.0038, 1.8252, 1.9347, 1.9019, 0.015),
    ("noncompact_gauss_hyperbolic", 9, 2.0046, 1.8342, 1.9542, 1.9083, 0.015),
    ("noncompact_gauss_3d", 6, 2.8222, 2.3123, 2.6856, 2.5360, 0.03),
    ("halfspace_gauss_3d", 7, 2.8143, 2.3494, 2.6887, 2.5338, 0.03),
]


@pytest.mark.parametrize("name, d, upper, lower, stokes_upper, stokes_lower, tol", REFERENCE_ROWS)
def test_reference_values(problems_dir, name, d, upper, lower, stokes_upper, stokes_lower, tol):
    spec = load_problem(problems_dir / f"{name}.prob")
    report = sweep(spec, d, d, use_stokes="both", sides="both", workers=2)
    assert report.all_ok, report.issues
    assert report.row(d, "upper", False).value == pytest.approx(upper, abs=tol)
    assert report.row(d, "lower", False).value == pytest.approx(lower, abs=tol)
    assert report.row(d, "upper", True).value == pytest.approx(stokes_upper, abs=tol)
    assert report.row(d, "lower", True).value == pytest.approx(stokes_lower, abs=tol)


@lru_cache(maxsize=None)
def low_degree_sweep(path: str):
    return sweep(load_problem(PROBLEMS / path), 3, 5, use_stokes="both", sides="both", workers=2)


def tolerance(value: float) -> float:
    return SLACK * max(1.0, abs(value))


@pytest.mark.parametrize("path", PROBLEM_FILES)
def test_bounds_are_monotone_in_degree(path):
    report = low_degree_sweep(path)
    assert report.all_ok, report.issues
    assert report.issues == []
    for stokes in (False, True):
        upper = [value for _, value in report.series("upper", stokes)]
        lower = [value for _, value in report.series("lower", stokes)]
        assert len(upper) == len(lower) == 3
        for prev, nxt in zip(upper, upper[1:]):
            assert nxt <= prev + tolerance(prev)
        for prev, nxt in zip(lower, lower[1:]):
            assert nxt >= prev - tolerance(prev)


@pytest.mark.parametrize("path", PROBLEM_FILES)
def test_stokes_rows_never_loosen_the_bounds(path):
    report = low_degree_sweep(path)
    for d in (3, 4, 5):
        plain_upper = report.row(d, "upper", False).value
        plain_lower = report.row(d, "lower", False).value
        assert report.row(d, "upper", True).value <= plain_upper + tolerance(plain_upper)
        assert report.row(d, "lower", True).value >= plain_lower - tolerance(plain_lower)


@pytest.mark.parametrize("path", PROBLEM_FILES)
def test_bounds_sandwich_monte_carlo(path):
    report = low_degree_sweep(path)
    mc = estimate(load_problem(PROBLEMS / path), 1_000_000, seed=1)
    assert report.all_ok, report.issues
    assert sandwich_violations(report, mc) == []

import math

import numpy as np
import pytest
from scipy import integrate

from measures import (
    ExponentialMeasure,
    GaussianMeasure,
    LebesgueMeasure,
    MeasureSpec,
    available_measures,
    build_measure,
    density_factors,
    exponential_moments,
    gaussian_axis_moments,
    gaussian_moments,
    interval_moments,
    lebesgue_moments,
)


class TestLebesgue:
    def test_unit_box_moments(self):
        z = lebesgue_moments([(-1.0, 1.0), (-1.0, 1.0)], 2)
        assert z[(0, 0)] == 4.0
        assert z[(1, 0)] == 0.0
        assert z[(2, 0)] == pytest.approx(4.0 / 3.0)
        assert z[(1, 1)] == 0.0

    def test_one_dimensional_values(self):
        np.testing.assert_allclose(interval_moments(-1.0, 1.0, 4), [2.0, 0.0, 2.0 / 3.0, 0.0, 0.4])

    @pytest.mark.parametrize("a", range(7))
    def test_matches_quadrature(self, a):
        value, _ = integrate.quad(lambda t: t**a, -0.5, 2.0)
        assert interval_moments(-0.5, 2.0, 6)[a] == pytest.approx(value, rel=1e-12)

    def test_degenerate_box(self):
        with pytest.raises(ValueError):
            LebesgueMeasure([(1.0, 1.0)])

    def test_density_is_constant(self):
        q, r = LebesgueMeasure([(-1.0, 1.0)]).density_factors()
        assert q.is_constant and r.is_zero

    def test_samples_stay_in_box(self):
        points = LebesgueMeasure([(-2.0, 2.0), (0.0, 1.0)]).sample(np.random.default_rng(0), 1000)
        assert points.shape == (1000, 2)
        assert (points[:, 0] >= -2).all() and (points[:, 0] <= 2).all()
        assert (points[:, 1] >= 0).all() and (points[:, 1] <= 1).all()


class TestGaussian:
    def test_total_mass(self):
        measure = GaussianMeasure(2, 0.8)
        assert measure.total_mass() == pytest.approx(math.pi * 0.8)

    def test_second_moment(self):
        sigma2 = 0.8
        z = gaussian_moments(sigma2, 1, 4)
        assert z[(2,)] == pytest.approx(math.sqrt(math.pi * sigma2) * sigma2 / 2)
        assert z[(1,)] == 0.0

    @pytest.mark.parametrize("a", range(9))
    def test_matches_quadrature(self, a):
        value, _ = integrate.quad(lambda t: t**a * math.exp(-t * t / 0.8), -np.inf, np.inf)
        assert gaussian_axis_moments(0.8, 8)[a] == pytest.approx(value, rel=1e-9, abs=1e-12)

    def test_density_factors(self):
        q, r = density_factors(MeasureSpec("gaussian", sigma2=0.5), 2)
        assert q.coefficient((0, 0)) == 1.0
        assert r.coefficient((2, 0)) == pytest.approx(-2.0)
        assert r.coefficient((0, 2)) == pytest.approx(-2.0)

    def test_sample_variance(self):
        points = GaussianMeasure(2, 0.8).sample(np.random.default_rng(1), 200_000)
        np.testing.assert_allclose(points.var(axis=0), [0.4, 0.4], rtol=0.02)
        np.testing.assert_allclose(points.mean(axis=0), [0.0, 0.0], atol=0.01)

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            MeasureSpec("gaussian", sigma2=0.0)


class TestExponential:
    def test_factorial_moments(self):
        z = exponential_moments(2, 4)
        assert z[(0, 0)] == 1.0
        assert z[(3, 1)] == 6.0
        assert z[(2, 2)] == 4.0

    def test_support_rows(self):
        rows = ExponentialMeasure(2).support_constraints()
        assert [g.to_string() for g in rows] == ["x1", "x2"]

    @pytest.mark.parametrize("a", range(6))
    def test_matches_quadrature(self, a):
        value, _ = integrate.quad(lambda t: t**a * math.exp(-t), 0.0, np.inf)
        assert ExponentialMeasure(1).axis_moments(0, 5)[a] == pytest.approx(value, rel=1e-9)

    def test_samples_are_positive(self):
        points = ExponentialMeasure(3).sample(np.random.default_rng(2), 5000)
        assert (points >= 0).all()
        assert points.mean() == pytest.approx(1.0, rel=0.05)


class TestRegistry:
    def test_build_each_kind(self):
        assert build_measure(MeasureSpec("lebesgue", box=((-1, 1),)), 1).name == "lebesgue"
        assert build_measure(MeasureSpec("gaussian", sigma2=1.0), 3).n == 3
        assert isinstance(build_measure(MeasureSpec("exponential"), 2), ExponentialMeasure)

    def test_lebesgue_needs_box(self):
        with pytest.raises(ValueError):
            build_measure(MeasureSpec("lebesgue"), 2)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            MeasureSpec("cauchy")

    def test_descriptions(self):
        names = [entry["name"] for entry in available_measures()]
        assert names == ["lebesgue", "gaussian", "exponential"]

    def test_to_dict(self):
        info = GaussianMeasure(1, 0.8).to_dict()
        assert info["sigma2"] == 0.8
        assert info["total_mass"] == pytest.approx(math.sqrt(0.8 * math.pi))

import math

import pytest

from algebra import parse
from geometry import BasicSet, ProblemSpec, UnionSet, load_problem
from measures import MeasureSpec
from montecarlo import MIN_SAMPLES, estimate


def never(measure: MeasureSpec, n: int = 2) -> ProblemSpec:
    names = [f"x{i + 1}" for i in range(n)]
    return ProblemSpec(
        n=n,
        measure=measure,
        union=UnionSet((BasicSet("empty", (parse("-1", names),)),)),
        variables=tuple(names),
    )


class TestEstimate:
    def test_whole_box_is_hit_every_time(self, problems_dir):
        mc = estimate(load_problem(problems_dir / "whole_box.prob"), 10_000)
        assert mc.hits == mc.samples
        assert mc.estimate == pytest.approx(4.0)
        assert mc.std_error == 0.0
        assert mc.ci_low == mc.ci_high == mc.estimate

    def test_empty_set_is_never_hit(self):
        mc = estimate(never(MeasureSpec("lebesgue", box=((-1.0, 1.0), (0.0, 3.0)))), 5_000)
        assert mc.hits == 0
        assert mc.estimate == 0.0
        assert mc.mass_total == pytest.approx(6.0)

    def test_unit_disc(self, problems_dir):
        mc = estimate(load_problem(problems_dir / "unit_disc.prob"), 1_000_000, seed=7)
        assert abs(mc.estimate - math.pi) <= 4 * mc.std_error
        assert mc.ci_low < mc.estimate < mc.ci_high

    def test_exponential_triangle(self, problems_dir):
        spec = load_problem(problems_dir / "exponential_triangle.prob")
        mc = estimate(spec, 200_000, seed=3)
        assert abs(mc.estimate - spec.reference_value) <= 5 * mc.std_error
        assert mc.mass_total == pytest.approx(1.0)

    def test_gaussian_total_mass(self):
        mc = estimate(never(MeasureSpec("gaussian", sigma2=0.8)), 200)
        assert mc.mass_total == pytest.approx(math.pi * 0.8)

    def test_interval_width_follows_confidence(self, problems_dir):
        mc = estimate(load_problem(problems_dir / "unit_disc.prob"), 10_000, confidence=0.99)
        assert (mc.ci_high - mc.estimate) / mc.std_error == pytest.approx(2.5758293035489, rel=1e-9)


class TestReproducibility:
    def test_same_seed_same_result(self, problems_dir):
        spec = load_problem(problems_dir / "two_ellipses_lebesgue.prob")
        assert estimate(spec, 20_000, seed=11) == estimate(spec, 20_000, seed=11)

    def test_seed_changes_result(self, problems_dir):
        spec = load_problem(problems_dir / "two_ellipses_lebesgue.prob")
        assert estimate(spec, 20_000, seed=1).hits != estimate(spec, 20_000, seed=2).hits

    def test_sharded_runs_are_deterministic(self, problems_dir):
        spec = load_problem(problems_dir / "unit_disc.prob")
        first = estimate(spec, 30_001, seed=5, shards=4)
        assert first == estimate(spec, 30_001, seed=5, shards=4)
        assert first.shards == 4
        assert first.samples == 30_001

    def test_chunking_does_not_change_hits(self, problems_dir):
        spec = load_problem(problems_dir / "unit_disc.prob")
        assert estimate(spec, 10_000, seed=9, chunk=10_000).hits == estimate(spec, 10_000, seed=9, chunk=333).hits


class TestArguments:
    def test_too_few_samples(self, problems_dir):
        with pytest.raises(ValueError):
            estimate(load_problem(problems_dir / "unit_disc.prob"), MIN_SAMPLES - 1)

    def test_shards_must_be_positive(self, problems_dir):
        with pytest.raises(ValueError):
            estimate(load_problem(problems_dir / "unit_disc.prob"), 1000, shards=0)

    def test_to_dict(self, problems_dir):
        info = estimate(load_problem(problems_dir / "unit_disc.prob"), 1000).to_dict()
        assert set(info) >= {"samples", "hits", "estimate", "std_error", "ci_low", "ci_high", "seed"}


@pytest.mark.slow
def test_interval_coverage(problems_dir):
    spec = load_problem(problems_dir / "unit_disc.prob")
    runs = 300
    covered = sum(
        1
        for seed in range(runs)
        if (mc := estimate(spec, 4_000, seed=seed, confidence=0.95)).ci_low <= math.pi <= mc.ci_high
    )
    assert covered / runs >= 0.9

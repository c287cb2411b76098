import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from hierarchy import BoundsReport, ReportRow
from main import (
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_USAGE,
    EXIT_VIOLATION,
    create_api_app,
    export_path,
    run_cli,
    sandwich_violations,
)
from montecarlo import McEstimate


def bounds_csv(path: Path, upper: float, lower: float) -> Path:
    report = BoundsReport(
        rows=[
            ReportRow(d=4, side="upper", stokes=True, value=upper, status="optimal"),
            ReportRow(d=4, side="lower", stokes=True, value=lower, status="optimal"),
        ]
    )
    return report.write_csv(path)


def mc(value: float, std_error: float) -> McEstimate:
    return McEstimate(
        samples=10_000,
        hits=0,
        estimate=value,
        std_error=std_error,
        ci_low=value - 3 * std_error,
        ci_high=value + 3 * std_error,
        seed=0,
        confidence=0.99,
        mass_total=4.0,
    )


class TestExport:
    def test_single_degree_writes_one_file(self, problems_dir, tmp_path):
        target = tmp_path / "out.dat-s"
        code = run_cli(
            ["solve", str(problems_dir / "interval_1d.prob"), "--d", "5..5", "--export-sdpa", str(target), "--no-solve"]
        )
        assert code == EXIT_OK
        assert sorted(p.name for p in tmp_path.iterdir()) == ["out.dat-s"]
        assert "= mDIM" in target.read_text()

    def test_degree_range_numbers_the_files(self, problems_dir, tmp_path):
        code = run_cli(
            [
                "solve",
                str(problems_dir / "unit_disc.prob"),
                "--d",
                "2..3",
                "--stokes",
                "--export-sdpa",
                str(tmp_path / "disc.dat-s"),
                "--no-solve",
            ]
        )
        assert code == EXIT_OK
        assert sorted(p.name for p in tmp_path.iterdir()) == ["disc.d2.dat-s", "disc.d3.dat-s"]

    def test_lower_side_exports_the_complement(self, problems_dir, tmp_path):
        upper = tmp_path / "upper.dat-s"
        lower = tmp_path / "lower.dat-s"
        problem = str(problems_dir / "interval_1d.prob")
        assert run_cli(["solve", problem, "--d", "3", "--export-sdpa", str(upper), "--no-solve"]) == EXIT_OK
        assert (
            run_cli(["solve", problem, "--d", "3", "--sides", "lower", "--export-sdpa", str(lower), "--no-solve"])
            == EXIT_OK
        )
        assert upper.read_text() != lower.read_text()

    def test_export_path(self):
        assert export_path(Path("out.dat-s"), 5, single=True) == Path("out.dat-s")
        assert export_path(Path("runs/out.dat-s"), 5, single=False) == Path("runs/out.d5.dat-s")


class TestUsageErrors:
    @pytest.mark.parametrize(
        "extra",
        [
            ["--d", "5..3"],
            ["--d", "13"],
            ["--d", "x..4"],
            ["--no-solve"],
            ["--stokes", "--compare-stokes"],
            ["--d", "1", "--moment-order", "4"],
            ["--bonferroni-depth", "3"],
        ],
    )
    def test_bad_flags(self, problems_dir, extra):
        assert run_cli(["solve", str(problems_dir / "interval_1d.prob"), *extra]) == EXIT_USAGE

    def test_missing_problem(self, tmp_path):
        assert run_cli(["solve", str(tmp_path / "absent.prob"), "--d", "2"]) == EXIT_USAGE

    def test_malformed_problem(self, tmp_path):
        path = tmp_path / "broken.prob"
        path.write_text('{"schema_version": 1,\n "name": }')
        assert run_cli(["solve", str(path), "--d", "2"]) == EXIT_USAGE

    def test_subcommand_is_required(self):
        with pytest.raises(SystemExit):
            run_cli([])


class TestCheck:
    def test_missing_report(self, problems_dir, tmp_path):
        code = run_cli(["check", str(problems_dir / "interval_1d.prob"), "--report", str(tmp_path / "none.csv")])
        assert code == EXIT_USAGE

    def test_swapped_bounds_are_a_violation(self, problems_dir, tmp_path):
        report = bounds_csv(tmp_path / "swapped.csv", upper=1.0, lower=2.0)
        code = run_cli(["check", str(problems_dir / "interval_1d.prob"), "--report", str(report), "--mc-n", "10000"])
        assert code == EXIT_VIOLATION

    def test_consistent_bounds_pass(self, problems_dir, tmp_path):
        report = bounds_csv(tmp_path / "good.csv", upper=2.0, lower=1.0)
        code = run_cli(["check", str(problems_dir / "interval_1d.prob"), "--report", str(report), "--mc-n", "10000"])
        assert code == EXIT_OK

    def test_too_few_samples(self, problems_dir, tmp_path):
        report = bounds_csv(tmp_path / "good.csv", upper=2.0, lower=1.0)
        code = run_cli(["check", str(problems_dir / "interval_1d.prob"), "--report", str(report), "--mc-n", "10"])
        assert code == EXIT_USAGE


class TestSandwich:
    def report(self, upper: float, lower: float) -> BoundsReport:
        return BoundsReport(
            rows=[
                ReportRow(d=2, side="upper", stokes=False, value=upper, status="optimal"),
                ReportRow(d=2, side="lower", stokes=False, value=lower, status="optimal"),
            ]
        )

    def test_consistent(self):
        assert sandwich_violations(self.report(3.2, 3.0), mc(3.14, 0.01)) == []

    def test_upper_below_estimate(self):
        violations = sandwich_violations(self.report(3.0, 2.9), mc(3.14, 0.01))
        assert len(violations) == 1
        assert violations[0].startswith("upper d=2")

    def test_within_three_sigma_is_tolerated(self):
        assert sandwich_violations(self.report(3.12, 3.0), mc(3.14, 0.01)) == []

    def test_lower_above_upper(self):
        violations = sandwich_violations(self.report(3.15, 3.16), mc(3.14, 0.01))
        assert any("lower 3.160000 > upper 3.150000" in v for v in violations)

    def test_failed_rows_are_skipped(self):
        report = BoundsReport(rows=[ReportRow(d=2, side="upper", stokes=False, value=None, status="infeasible")])
        assert sandwich_violations(report, mc(3.14, 0.01)) == []


@pytest.mark.solver
class TestSolve:
    def test_whole_box_report(self, problems_dir, tmp_path):
        csv_path = tmp_path / "box.csv"
        json_path = tmp_path / "box.json"
        code = run_cli(
            [
                "solve",
                str(problems_dir / "whole_box.prob"),
                "--d",
                "2..3",
                "--sides",
                "upper",
                "--csv",
                str(csv_path),
                "--json",
                str(json_path),
                "--mc-n",
                "1000",
            ]
        )
        assert code == EXIT_OK
        assert csv_path.read_text().splitlines()[0] == "d,side,stokes,value,status,gap_eps,wall_ms,gap_eps_ref"
        payload = json.loads(json_path.read_text())
        assert len(payload["problem_hash"]) == 64
        assert payload["settings"]["monte_carlo"]["samples"] == 1000
        assert payload["rows"][0]["value"] == pytest.approx(4.0, abs=1e-5)
        assert {"numpy", "cvxpy"} <= set(payload["versions"])

    def test_solver_failure_exit_code(self, problems_dir):
        code = run_cli(["solve", str(problems_dir / "interval_1d.prob"), "--d", "2", "--solver", "NOT_A_SOLVER"])
        assert code == EXIT_SOLVER


class TestApi:
    @pytest.fixture
    def client(self):
        return TestClient(create_api_app())

    @pytest.fixture
    def document(self, problems_dir):
        return json.loads((problems_dir / "interval_1d.prob").read_text())

    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy"}

    def test_measures_and_bases(self, client):
        assert [m["name"] for m in client.get("/measures").json()["measures"]] == ["lebesgue", "gaussian", "exponential"]
        assert [b["name"] for b in client.get("/bases").json()["bases"]] == ["monomial", "chebyshev"]

    def test_empty_range(self, client, document):
        response = client.post("/bounds", json={"problem": document, "d_min": 4, "d_max": 3})
        assert response.status_code == 400

    def test_unknown_variable(self, client, document):
        document["sets"][0]["inequalities"] = ["y + 1"]
        response = client.post("/bounds", json={"problem": document, "d_min": 2, "d_max": 2})
        assert response.status_code == 400

    def test_degree_cap(self, client, document):
        response = client.post("/bounds", json={"problem": document, "d_min": 2, "d_max": 13})
        assert response.status_code == 422

    @pytest.mark.solver
    def test_bounds(self, client, document):
        response = client.post("/bounds", json={"problem": document, "d_min": 3, "d_max": 3, "sides": "both"})
        assert response.status_code == 200
        rows = response.json()["rows"]
        assert [row["side"] for row in rows] == ["upper", "lower"]
        assert rows[1]["value"] <= 1.6 + 1e-6 <= rows[0]["value"] + 2e-6

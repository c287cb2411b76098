import json
import math

import numpy as np
import pytest

from algebra import Polynomial, parse
from geometry import (
    BasicSet,
    MissingBoxError,
    PieceCountError,
    ProblemFormatError,
    ProblemSpec,
    UnionSet,
    complement_union,
    document_to_spec,
    k_intersections,
    load_problem,
    membership,
    normalize,
    parse_document,
    problem_hash,
    total_mass,
)
from measures import MeasureSpec


def interval_problem() -> ProblemSpec:
    x = ["x"]
    return ProblemSpec(
        n=1,
        measure=MeasureSpec("lebesgue", box=((-2.0, 2.0),)),
        union=UnionSet(
            (
                BasicSet("left", (parse("x + 1", x), parse("-0.2 - x", x))),
                BasicSet("right", (parse("x - 0.2", x), parse("1 - x", x))),
            )
        ),
        variables=("x",),
        name="interval",
    )


def document(**overrides) -> dict:
    base = {
        "schema_version": 1,
        "name": "disc",
        "dimension": 2,
        "variables": ["x1", "x2"],
        "measure": {"kind": "lebesgue", "box": [[-1, 1], [-1, 1]]},
        "sets": [{"name": "disc", "inequalities": ["1 - x1^2 - x2^2"]}],
    }
    base.update(overrides)
    return base


class TestSets:
    def test_contains_is_non_strict(self):
        disc = BasicSet("disc", (parse("1 - x1^2 - x2^2", ["x1", "x2"]),))
        assert disc.contains(np.array([1.0, 0.0]))
        assert not disc.contains(np.array([1.0, 0.1]))

    def test_batch_membership(self):
        spec = interval_problem()
        inside = spec.union.contains(np.array([[-0.5], [0.0], [0.5], [1.5]]))
        assert inside.tolist() == [True, False, True, False]

    def test_empty_piece_rejected(self):
        with pytest.raises(ValueError):
            BasicSet("empty", ())

    def test_membership_checks_dimension(self):
        with pytest.raises(ValueError):
            membership(interval_problem(), [0.0, 0.0])


class TestNormalize:
    def test_box_maps_to_unit_cube(self):
        spec = normalize(interval_problem())
        assert spec.box == ((-1.0, 1.0),)
        assert spec.mass_rescale == 2.0
        # x = 2u, so x + 1 >= 0 becomes 2u + 1 >= 0
        assert spec.pieces[0].inequalities[0] == parse("2*u + 1", ["u"])

    def test_membership_is_preserved(self):
        raw = interval_problem()
        spec = normalize(raw)
        points = np.linspace(-2, 2, 41)[:, None]
        np.testing.assert_array_equal(raw.union.contains(points), spec.union.contains(spec.scaling.apply(points)))

    def test_idempotent(self):
        spec = normalize(interval_problem())
        assert normalize(spec) is spec

    def test_total_mass_in_original_units(self):
        assert total_mass(interval_problem()) == pytest.approx(4.0)

    def test_gaussian_is_untouched(self):
        raw = ProblemSpec(
            n=1,
            measure=MeasureSpec("gaussian", sigma2=0.8),
            union=UnionSet((BasicSet("a", (parse("1 - x^2", ["x"]),)),)),
            variables=("x",),
        )
        spec = normalize(raw)
        assert spec.scaling.is_identity
        assert spec.mass_rescale == 1.0
        assert total_mass(spec) == pytest.approx(math.sqrt(0.8 * math.pi))

    def test_missing_box(self):
        raw = ProblemSpec(
            n=1,
            measure=MeasureSpec("lebesgue"),
            union=UnionSet((BasicSet("a", (parse("1 - x^2", ["x"]),)),)),
        )
        with pytest.raises(MissingBoxError):
            normalize(raw)


class TestComplement:
    def test_de_morgan_pieces(self):
        spec = normalize(interval_problem())
        complement = complement_union(spec)
        # one reversed row from each of the two pieces: 2 * 2 selections, plus the box row
        assert complement.union.p == 4
        assert all(len(piece.inequalities) == 3 for piece in complement.pieces)

    def test_complement_covers_the_rest(self):
        spec = normalize(interval_problem())
        complement = complement_union(spec)
        points = np.random.default_rng(0).uniform(-1, 1, size=(2000, 1))
        inside = spec.union.contains(points)
        outside = complement.union.contains(points)
        assert (inside | outside).all()
        # overlaps only on boundaries, which random points never hit
        assert not (inside & outside).any()

    def test_duplicate_selections_collapse(self):
        x = ["x"]
        g, h = parse("1 - 4*x^2", x), parse("x + 0.5", x)
        spec = normalize(
            ProblemSpec(
                n=1,
                measure=MeasureSpec("lebesgue", box=((-1.0, 1.0),)),
                union=UnionSet((BasicSet("a", (g, h)), BasicSet("b", (g, h)))),
            )
        )
        # selections (g, h) and (h, g) give the same constraint multiset
        assert complement_union(spec).union.p == 3

    def test_gaussian_complement_has_no_box_rows(self):
        spec = normalize(
            ProblemSpec(
                n=1,
                measure=MeasureSpec("gaussian", sigma2=1.0),
                union=UnionSet((BasicSet("a", (parse("1 - x^2", ["x"]),)),)),
            )
        )
        complement = complement_union(spec)
        assert complement.pieces[0].inequalities == (parse("x^2 - 1", ["x"]),)

    def test_cap(self):
        spec = normalize(interval_problem())
        with pytest.raises(PieceCountError) as info:
            complement_union(spec, cap=3)
        assert info.value.count == 4

    def test_requires_normalized(self):
        with pytest.raises(ValueError):
            complement_union(interval_problem())


class TestIntersections:
    def test_counts(self):
        spec = interval_problem()
        assert len(k_intersections(spec, 1)) == 2
        pair = k_intersections(spec, 2)
        assert len(pair) == 1
        assert len(pair[0].inequalities) == 4

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            k_intersections(interval_problem(), 3)


class TestLoader:
    def test_load_shipped_problem(self, problems_dir):
        spec = load_problem(problems_dir / "two_ellipses_lebesgue.prob")
        assert spec.n == 2
        assert spec.union.p == 2
        assert spec.reference_value == pytest.approx(4 * math.pi - 8 * math.atan(0.5))

    def test_every_shipped_problem_loads(self, problems_dir):
        files = sorted(problems_dir.glob("*.prob"))
        assert len(files) >= 13
        for path in files:
            spec = normalize(load_problem(path))
            assert spec.union.p >= 1

    def test_hash_is_stable(self, problems_dir):
        path = problems_dir / "unit_disc.prob"
        assert problem_hash(path) == problem_hash(path)
        assert len(problem_hash(path)) == 64

    def test_syntax_error_reports_line(self, tmp_path):
        text = json.dumps(document(sets=[{"name": "bad", "inequalities": ["1 - x1^^2"]}]), indent=2)
        path = tmp_path / "bad.prob"
        path.write_text(text)
        with pytest.raises(ProblemFormatError) as info:
            load_problem(path)
        assert info.value.line == text.splitlines().index('        "1 - x1^^2"') + 1

    def test_unknown_variable(self):
        with pytest.raises(ProblemFormatError):
            document_to_spec(parse_document(json.dumps(document(sets=[{"name": "a", "inequalities": ["y"]}]))))

    @pytest.mark.parametrize(
        "overrides",
        [
            {"schema_version": 2},
            {"variables": ["x1"]},
            {"sets": []},
            {"measure": {"kind": "gaussian"}},
            {"measure": {"kind": "lebesgue", "box": [[1, -1], [-1, 1]]}},
            {"measure": {"kind": "poisson"}},
        ],
    )
    def test_invalid_documents(self, overrides):
        with pytest.raises(ProblemFormatError):
            parse_document(json.dumps(document(**overrides)))

    def test_bad_json(self):
        with pytest.raises(ProblemFormatError) as info:
            parse_document('{"name": \n oops}')
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProblemFormatError):
            load_problem(tmp_path / "absent.prob")

    def test_lebesgue_without_box_is_caught_at_normalize(self):
        spec = document_to_spec(parse_document(json.dumps(document(measure={"kind": "lebesgue"}))))
        with pytest.raises(MissingBoxError):
            normalize(spec)


def test_polynomial_dimension_matches_problem():
    with pytest.raises(ValueError):
        ProblemSpec(
            n=2,
            measure=MeasureSpec("gaussian", sigma2=1.0),
            union=UnionSet((BasicSet("a", (Polynomial.variable(1, 0),)),)),
        )

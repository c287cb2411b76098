from .loader import ProblemDocument, document_to_spec, load_problem, parse_document, problem_hash
from .problem import (
    DEFAULT_COMPLEMENT_CAP,
    MissingBoxError,
    PieceCountError,
    ProblemFormatError,
    ProblemSpec,
    box_constraints,
    complement_union,
    k_intersections,
    membership,
    normalize,
    total_mass,
)
from .sets import BasicSet, UnionSet

__all__ = [
    "DEFAULT_COMPLEMENT_CAP",
    "BasicSet",
    "MissingBoxError",
    "PieceCountError",
    "ProblemDocument",
    "ProblemFormatError",
    "ProblemSpec",
    "UnionSet",
    "box_constraints",
    "complement_union",
    "document_to_spec",
    "k_intersections",
    "load_problem",
    "membership",
    "normalize",
    "parse_document",
    "problem_hash",
    "total_mass",
]

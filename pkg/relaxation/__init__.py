from .bases import BaseBasis, ChebyshevBasis, MonomialBasis, available_bases, get_basis
from .builder import (
    ConicProblem,
    DegreeTooSmallError,
    PsdBlock,
    build_qd,
    constraint_order,
    localizing_matrix_map,
    minimum_order,
    moment_matrix_map,
    piece_constraints,
    riesz_row,
    with_equalities,
)
from .stokes import StokesConstraint, build_qd_stokes, stokes_polynomials, stokes_product, stokes_rows

__all__ = [
    "BaseBasis",
    "ChebyshevBasis",
    "ConicProblem",
    "DegreeTooSmallError",
    "MonomialBasis",
    "PsdBlock",
    "StokesConstraint",
    "available_bases",
    "build_qd",
    "build_qd_stokes",
    "constraint_order",
    "get_basis",
    "localizing_matrix_map",
    "minimum_order",
    "moment_matrix_map",
    "piece_constraints",
    "riesz_row",
    "stokes_polynomials",
    "stokes_product",
    "stokes_rows",
    "with_equalities",
]

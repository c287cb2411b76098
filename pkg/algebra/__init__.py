from .monomials import MonomialIndex, count_monomials, graded_lex_exponents, monomial_index
from .parser import PolynomialSyntaxError, UnknownVariableError, parse
from .polynomial import AffineMap, DimensionMismatchError, Exponent, Polynomial, grlex_key

__all__ = [
    "AffineMap",
    "DimensionMismatchError",
    "Exponent",
    "MonomialIndex",
    "Polynomial",
    "PolynomialSyntaxError",
    "UnknownVariableError",
    "count_monomials",
    "graded_lex_exponents",
    "grlex_key",
    "monomial_index",
    "parse",
]

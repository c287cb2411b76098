"""
Monomial enumeration for Moment Bounds
Graded-lex index of N^n_d used to lay out moment vectors and matrices
"""

import math
from functools import lru_cache
from typing import Dict, Iterator, Tuple

from .polynomial import Exponent


def count_monomials(n: int, d: int) -> int:
    """s(d) = C(n + d, d), the number of monomials of degree at most d"""
    return math.comb(n + d, d)


def _exact_degree(n: int, degree: int) -> Iterator[Exponent]:
    if n == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in _exact_degree(n - 1, degree - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def graded_lex_exponents(n: int, d: int) -> Tuple[Exponent, ...]:
    """All exponents of total degree <= d in graded lexicographic order"""
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    return tuple(e for degree in range(d + 1) for e in _exact_degree(n, degree))


class MonomialIndex:
    """Ordered exponents of N^n_d with inverse lookup; index 0 is the constant monomial"""

    def __init__(self, n: int, d: int):
        self.n = n
        self.d = d
        self.exponents = graded_lex_exponents(n, d)
        self._positions: Dict[Exponent, int] = {e: i for i, e in enumerate(self.exponents)}

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self.exponents)

    def __getitem__(self, position: int) -> Exponent:
        return self.exponents[position]

    def __contains__(self, exponent) -> bool:
        return tuple(exponent) in self._positions

    def index(self, exponent) -> int:
        """Position of an exponent; raises KeyError when its degree exceeds d"""
        try:
            return self._positions[tuple(exponent)]
        except KeyError:
            raise KeyError(f"exponent {tuple(exponent)} is not in N^{self.n}_{self.d}") from None

    def __repr__(self) -> str:
        return f"MonomialIndex(n={self.n}, d={self.d}, size={len(self)})"


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> MonomialIndex:
    """Shared, cached MonomialIndex instance"""
    return MonomialIndex(n, d)

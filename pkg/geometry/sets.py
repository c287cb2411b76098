"""
Semi-algebraic sets for Moment Bounds
Basic sets {g_j >= 0} and finite unions of them
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from algebra.polynomial import AffineMap, DimensionMismatchError, Polynomial


@dataclass(frozen=True)
class BasicSet:
    """{x : g_j(x) >= 0 for every j}"""

    name: str
    inequalities: Tuple[Polynomial, ...]

    def __post_init__(self):
        inequalities = tuple(self.inequalities)
        if not inequalities:
            raise ValueError(f"basic set {self.name!r} needs at least one inequality")
        dimensions = {g.n for g in inequalities}
        if len(dimensions) != 1:
            raise DimensionMismatchError(
                f"basic set {self.name!r} mixes dimensions {sorted(dimensions)}"
            )
        object.__setattr__(self, "inequalities", inequalities)

    @property
    def n(self) -> int:
        return self.inequalities[0].n

    @property
    def max_degree(self) -> int:
        return max(g.degree for g in self.inequalities)

    def contains(self, points) -> np.ndarray:
        """Non-strict membership for one point (n,) or a batch (N, n)"""
        pts = np.asarray(points, dtype=float)
        inside = np.ones(pts.shape[:-1], dtype=bool)
        for g in self.inequalities:
            inside &= np.asarray(g.eval(pts)) >= 0.0
        return inside

    def substitute_affine(self, mapping: AffineMap) -> "BasicSet":
        return BasicSet(self.name, tuple(g.substitute_affine(mapping) for g in self.inequalities))

    def constraint_key(self) -> Tuple:
        """Sorted term maps of the inequalities; equal keys mean identical constraint multisets"""
        return tuple(sorted(g.term_key() for g in self.inequalities))


@dataclass(frozen=True)
class UnionSet:
    """Finite union of basic sets; pieces may overlap"""

    pieces: Tuple[BasicSet, ...]

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a union needs at least one piece")
        dimensions = {piece.n for piece in pieces}
        if len(dimensions) != 1:
            raise DimensionMismatchError(f"union mixes dimensions {sorted(dimensions)}")
        object.__setattr__(self, "pieces", pieces)

    @property
    def p(self) -> int:
        return len(self.pieces)

    @property
    def n(self) -> int:
        return self.pieces[0].n

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        inside = np.zeros(pts.shape[:-1], dtype=bool)
        for piece in self.pieces:
            inside |= piece.contains(pts)
        return inside

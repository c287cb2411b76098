"""
Problem model for Moment Bounds
Reference measure + union of basic sets + the scaling state of the working coordinates
"""

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from algebra.polynomial import AffineMap, DimensionMismatchError, Polynomial
from measures.base_measure import MeasureSpec
from measures.registry import build_measure
from .sets import BasicSet, UnionSet

logger = logging.getLogger(__name__)

DEFAULT_COMPLEMENT_CAP = 256


class ProblemFormatError(ValueError):
    """Raised for invalid problem documents; carries a line and/or field location when known"""

    def __init__(self, message: str, line: Optional[int] = None, location: Optional[str] = None):
        self.line = line
        self.location = location
        super().__init__(message)


class MissingBoxError(ProblemFormatError):
    """Raised when a Lebesgue problem has no bounding box"""


class PieceCountError(ValueError):
    """Raised when a derived union would exceed the configured piece cap"""

    def __init__(self, count: int, cap: int, what: str = "pieces"):
        self.count = count
        self.cap = cap
        super().__init__(f"{what} count {count} exceeds the cap of {cap}")


@dataclass(frozen=True)
class ProblemSpec:
    """A union-measure problem, in original or working (normalized) coordinates"""

    n: int
    measure: MeasureSpec
    union: UnionSet
    scaling: Optional[AffineMap] = None
    mass_rescale: float = 1.0
    variables: Tuple[str, ...] = ()
    name: str = ""
    reference_value: Optional[float] = None
    normalized: bool = False

    def __post_init__(self):
        if self.union.n != self.n:
            raise DimensionMismatchError(f"union has dimension {self.union.n}, problem has {self.n}")
        if self.scaling is None:
            object.__setattr__(self, "scaling", AffineMap.identity(self.n))
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"x{k + 1}" for k in range(self.n)))
        if len(self.variables) != self.n:
            raise DimensionMismatchError(f"{len(self.variables)} variable names for dimension {self.n}")
        if not self.mass_rescale > 0:
            raise ValueError(f"mass_rescale must be positive, got {self.mass_rescale}")

    @property
    def box(self) -> Optional[Tuple[Tuple[float, float], ...]]:
        return self.measure.box

    @property
    def pieces(self) -> Tuple[BasicSet, ...]:
        return self.union.pieces

    def with_pieces(self, pieces: Sequence[BasicSet], name: Optional[str] = None) -> "ProblemSpec":
        """Same measure and scaling over a different union"""
        return replace(
            self,
            union=UnionSet(tuple(pieces)),
            name=self.name if name is None else name,
            reference_value=None,
        )


def normalize(raw: ProblemSpec) -> ProblemSpec:
    """
    Rewrite a problem so a Lebesgue box becomes [-1, 1]^n

    Constraints are composed with the inverse scaling, and mass_rescale records the
    Jacobian so reported bounds stay in original measure units. Gaussian and
    exponential problems pass through with identity scaling.

    Args:
        raw: Problem in original coordinates

    Returns:
        Equivalent normalized problem (returned unchanged if already normalized)
    """
    if raw.normalized:
        return raw
    if raw.measure.kind != "lebesgue":
        return replace(raw, scaling=AffineMap.identity(raw.n), normalized=True)
    if raw.measure.box is None:
        raise MissingBoxError(f"problem {raw.name!r}: lebesgue measure requires a box")
    if len(raw.measure.box) != raw.n:
        raise DimensionMismatchError(f"box has {len(raw.measure.box)} intervals for dimension {raw.n}")

    lo = np.array([interval[0] for interval in raw.measure.box])
    hi = np.array([interval[1] for interval in raw.measure.box])
    half = (hi - lo) / 2.0
    center = (hi + lo) / 2.0
    scaling = AffineMap(tuple(1.0 / half), tuple(-center / half))
    inverse = scaling.inverse()
    pieces = tuple(piece.substitute_affine(inverse) for piece in raw.union.pieces)
    jacobian = float(np.prod(half))
    logger.debug("Normalized %r: scale=%s offset=%s mass_rescale=%g", raw.name, scaling.scale, scaling.offset, jacobian)
    return replace(
        raw,
        union=UnionSet(pieces),
        measure=MeasureSpec("lebesgue", box=((-1.0, 1.0),) * raw.n),
        scaling=scaling,
        mass_rescale=raw.mass_rescale * jacobian,
        normalized=True,
    )


def box_constraints(n: int) -> List[Polynomial]:
    """1 - x_k^2 >= 0 for each axis of [-1, 1]^n"""
    return [1.0 - Polynomial.variable(n, k) ** 2 for k in range(n)]


def total_mass(spec: ProblemSpec) -> float:
    """mu of the whole support (box or full space) in original units"""
    spec = normalize(spec)
    return build_measure(spec.measure, spec.n).total_mass() * spec.mass_rescale


def complement_union(spec: ProblemSpec, cap: int = DEFAULT_COMPLEMENT_CAP) -> ProblemSpec:
    """
    Cover the complement of the union by basic sets (De Morgan expansion)

    Every selection of one constraint per piece yields the piece {-g_{i,j(i)} >= 0},
    intersected with the box rows 1 - x_k^2 >= 0 in the Lebesgue case.

    Args:
        spec: Normalized problem
        cap: Upper limit on the number of selections

    Returns:
        Problem over the complement with the same measure and scaling
    """
    if not spec.normalized:
        raise ValueError("complement_union requires a normalized problem")
    sizes = [len(piece.inequalities) for piece in spec.union.pieces]
    count = math.prod(sizes)
    if count > cap:
        raise PieceCountError(count, cap, "complement piece")

    box_rows = box_constraints(spec.n) if spec.measure.kind == "lebesgue" else []
    seen = set()
    pieces: List[BasicSet] = []
    for selection in itertools.product(*(range(size) for size in sizes)):
        reversed_rows = [-spec.union.pieces[i].inequalities[j] for i, j in enumerate(selection)]
        candidate = BasicSet(
            f"complement[{','.join(str(j) for j in selection)}]",
            tuple(reversed_rows + box_rows),
        )
        key = candidate.constraint_key()
        if key in seen:
            continue
        seen.add(key)
        pieces.append(candidate)
    logger.debug("Complement of %r has %d pieces (%d selections)", spec.name, len(pieces), count)
    return spec.with_pieces(pieces, name=f"{spec.name} complement".strip())


def k_intersections(spec: ProblemSpec, k: int) -> List[BasicSet]:
    """All C(p, k) intersections of k distinct pieces, constraints concatenated"""
    p = spec.union.p
    if not 1 <= k <= p:
        raise ValueError(f"k must be between 1 and {p}, got {k}")
    intersections = []
    for combo in itertools.combinations(spec.union.pieces, k):
        name = " & ".join(piece.name for piece in combo)
        rows = tuple(g for piece in combo for g in piece.inequalities)
        intersections.append(BasicSet(name, rows))
    return intersections


def membership(spec: ProblemSpec, point) -> bool:
    """True iff the point (working coordinates) lies in some piece"""
    pts = np.asarray(point, dtype=float)
    if pts.shape != (spec.n,):
        raise DimensionMismatchError(f"expected a point of dimension {spec.n}, got shape {pts.shape}")
    return bool(spec.union.contains(pts))

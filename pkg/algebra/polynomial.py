"""
Sparse multivariate polynomials for Moment Bounds
Immutable exponent -> coefficient maps with exact-structure arithmetic
"""

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

Exponent = Tuple[int, ...]
Number = Union[int, float]


class DimensionMismatchError(ValueError):
    """Raised when operands live in different ambient dimensions"""


def grlex_key(exponent: Exponent) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for graded lexicographic order: 1, x1, x2, x1^2, x1*x2, x2^2, ..."""
    return (sum(exponent), tuple(-e for e in exponent))


@dataclass(frozen=True)
class AffineMap:
    """Coordinate-wise affine change of variables x -> scale * x + offset"""

    scale: Tuple[float, ...]
    offset: Tuple[float, ...]

    def __post_init__(self):
        scale = tuple(float(s) for s in self.scale)
        offset = tuple(float(o) for o in self.offset)
        if len(scale) != len(offset):
            raise DimensionMismatchError(
                f"scale has {len(scale)} entries but offset has {len(offset)}"
            )
        if any(not s > 0.0 for s in scale):
            raise ValueError(f"AffineMap scale entries must be strictly positive, got {scale}")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls((1.0,) * n, (0.0,) * n)

    @property
    def n(self) -> int:
        return len(self.scale)

    @property
    def jacobian(self) -> float:
        """Determinant of the linear part"""
        return math.prod(self.scale)

    @property
    def is_identity(self) -> bool:
        return all(s == 1.0 for s in self.scale) and all(o == 0.0 for o in self.offset)

    def inverse(self) -> "AffineMap":
        return AffineMap(
            tuple(1.0 / s for s in self.scale),
            tuple(-o / s for s, o in zip(self.scale, self.offset)),
        )

    def apply(self, point) -> np.ndarray:
        """Map a point of shape (n,) or a batch of shape (N, n)"""
        pts = np.asarray(point, dtype=float)
        if pts.shape[-1] != self.n:
            raise DimensionMismatchError(f"expected points of dimension {self.n}, got {pts.shape}")
        return pts * np.asarray(self.scale) + np.asarray(self.offset)


class Polynomial:
    """Immutable sparse polynomial over R[x_1..x_n] with float coefficients"""

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Sequence[int], Number]] = None):
        """
        Build a polynomial from an exponent -> coefficient map

        Args:
            n: Ambient dimension
            terms: Mapping from exponent tuples (length n, entries >= 0) to coefficients.
                Exact zero coefficients are dropped.
        """
        if n < 0:
            raise ValueError(f"dimension must be non-negative, got {n}")
        cleaned: Dict[Exponent, float] = {}
        for raw_exponent, raw_coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in raw_exponent)
            if len(exponent) != n:
                raise DimensionMismatchError(
                    f"exponent {exponent} does not match dimension {n}"
                )
            if any(e < 0 for e in exponent):
                raise ValueError(f"exponent entries must be non-negative, got {exponent}")
            cleaned[exponent] = cleaned.get(exponent, 0.0) + float(raw_coeff)
        self._n = n
        self._terms = {e: c for e, c in cleaned.items() if c != 0.0}
        self._hash = None

    @classmethod
    def _wrap(cls, n: int, terms: Dict[Exponent, float]) -> "Polynomial":
        poly = cls.__new__(cls)
        poly._n = n
        poly._terms = {e: c for e, c in terms.items() if c != 0.0}
        poly._hash = None
        return poly

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._wrap(n, {})

    @classmethod
    def constant(cls, n: int, value: Number) -> "Polynomial":
        return cls._wrap(n, {(0,) * n: float(value)})

    @classmethod
    def variable(cls, n: int, k: int) -> "Polynomial":
        """The coordinate x_k (0-based index)"""
        if not 0 <= k < n:
            raise ValueError(f"coordinate index {k} out of range for dimension {n}")
        exponent = tuple(1 if i == k else 0 for i in range(n))
        return cls._wrap(n, {exponent: 1.0})

    @classmethod
    def monomial(cls, n: int, exponent: Sequence[int], coeff: Number = 1.0) -> "Polynomial":
        return cls(n, {tuple(exponent): coeff})

    # ---- inspection ---------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Exponent, float]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0"""
        return max((sum(e) for e in self._terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def coefficient(self, exponent: Sequence[int]) -> float:
        return self._terms.get(tuple(exponent), 0.0)

    def sorted_terms(self) -> List[Tuple[Exponent, float]]:
        """Terms in graded lexicographic order"""
        return sorted(self._terms.items(), key=lambda item: grlex_key(item[0]))

    def term_key(self) -> Tuple[Tuple[Exponent, float], ...]:
        """Canonical hashable form, used for exact structural comparisons"""
        return tuple(self.sorted_terms())

    # ---- arithmetic ---------------------------------------------------

    def _check_same_dimension(self, other: "Polynomial") -> None:
        if other._n != self._n:
            raise DimensionMismatchError(
                f"cannot combine polynomials of dimension {self._n} and {other._n}"
            )

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            self._check_same_dimension(other)
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Polynomial.constant(self._n, float(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for exponent, coeff in other._terms.items():
            out[exponent] = out.get(exponent, 0.0) + coeff
        return Polynomial._wrap(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap(self._n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scaled(self, factor: Number) -> "Polynomial":
        factor = float(factor)
        return Polynomial._wrap(self._n, {e: c * factor for e, c in self._terms.items()})

    def mul(self, other: "Polynomial") -> "Polynomial":
        """Exact sparse convolution of two polynomials"""
        self._check_same_dimension(other)
        out: Dict[Exponent, float] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exponent = tuple(x + y for x, y in zip(ea, eb))
                out[exponent] = out.get(exponent, 0.0) + ca * cb
        return Polynomial._wrap(self._n, out)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.mul(other)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Polynomial":
        if not isinstance(power, (int, np.integer)) or power < 0:
            raise ValueError(f"polynomial powers must be non-negative integers, got {power!r}")
        result = Polynomial.constant(self._n, 1.0)
        base = self
        while power:
            if power & 1:
                result = result.mul(base)
            power >>= 1
            if power:
                base = base.mul(base)
        return result

    def diff(self, k: int) -> "Polynomial":
        """Partial derivative with respect to x_k (0-based index)"""
        if not 0 <= k < self._n:
            raise ValueError(f"coordinate index {k} out of range for dimension {self._n}")
        out: Dict[Exponent, float] = {}
        for exponent, coeff in self._terms.items():
            power = exponent[k]
            if power == 0:
                continue
            lowered = exponent[:k] + (power - 1,) + exponent[k + 1:]
            out[lowered] = out.get(lowered, 0.0) + coeff * power
        return Polynomial._wrap(self._n, out)

    def substitute_affine(self, mapping: AffineMap) -> "Polynomial":
        """
        Compose with an affine map, returning x -> self(scale * x + offset) expanded

        Args:
            mapping: Coordinate-wise affine map of the same dimension

        Returns:
            The expanded composition; total degree is preserved
        """
        if mapping.n != self._n:
            raise DimensionMismatchError(
                f"affine map of dimension {mapping.n} applied to polynomial of dimension {self._n}"
            )
        if mapping.is_identity:
            return self

        cache: Dict[Tuple[int, int], List[Tuple[int, float]]] = {}

        def expansion(k: int, power: int) -> List[Tuple[int, float]]:
            key = (k, power)
            if key not in cache:
                s, o = mapping.scale[k], mapping.offset[k]
                cache[key] = [
                    (j, math.comb(power, j) * s**j * o ** (power - j)) for j in range(power + 1)
                ]
            return cache[key]

        out: Dict[Exponent, float] = {}
        zero = (0,) * self._n
        for exponent, coeff in self._terms.items():
            partial: Dict[Exponent, float] = {zero: coeff}
            for k, power in enumerate(exponent):
                if power == 0:
                    continue
                grown: Dict[Exponent, float] = {}
                for base, value in partial.items():
                    for j, factor in expansion(k, power):
                        if factor == 0.0:
                            continue
                        key = base[:k] + (j,) + base[k + 1:]
                        grown[key] = grown.get(key, 0.0) + value * factor
                partial = grown
            for key, value in partial.items():
                out[key] = out.get(key, 0.0) + value
        return Polynomial._wrap(self._n, out)

    def eval(self, point) -> Union[float, np.ndarray]:
        """
        Evaluate at a point of shape (n,) or at a batch of points of shape (N, n)

        Returns:
            A float for a single point, an array of shape (N,) for a batch
        """
        pts = np.asarray(point, dtype=float)
        if pts.shape[-1:] != (self._n,):
            raise DimensionMismatchError(f"expected points of dimension {self._n}, got {pts.shape}")
        if not self._terms:
            return 0.0 if pts.ndim == 1 else np.zeros(pts.shape[0])
        exponents = np.array(list(self._terms.keys()), dtype=float)
        coeffs = np.array(list(self._terms.values()))
        if pts.ndim == 1:
            return float(np.prod(pts[None, :] ** exponents, axis=1) @ coeffs)
        monomials = np.prod(pts[:, None, :] ** exponents[None, :, :], axis=2)
        return monomials @ coeffs

    # ---- comparison & printing ---------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    def to_string(self, variables: Optional[Sequence[str]] = None) -> str:
        """
        Render in the expression grammar accepted by `algebra.parser.parse`

        Coefficients are printed with repr() so parse(to_string(p)) reproduces p exactly.
        """
        names = list(variables) if variables is not None else [f"x{i + 1}" for i in range(self._n)]
        if len(names) != self._n:
            raise DimensionMismatchError(f"{len(names)} names given for dimension {self._n}")
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for index, (exponent, coeff) in enumerate(self.sorted_terms()):
            factors = [
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(names, exponent)
                if power
            ]
            magnitude = abs(coeff)
            if not factors:
                body = repr(magnitude)
            elif magnitude == 1.0:
                body = "*".join(factors)
            else:
                body = "*".join([repr(magnitude)] + factors)
            if index == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial(n={self._n}, {self.to_string()!r})"

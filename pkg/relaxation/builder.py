"""
Relaxation builder for Moment Bounds
Compiles a normalized problem and a relaxation order d into a ConicProblem:

    maximize   sum_i L_{y^i}(f)
    subject to M_d(z - sum_i y^i) >= 0,  M_d(y^i) >= 0,  M_{d - r_ij}(g_ij y^i) >= 0
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from algebra.monomials import monomial_index
from algebra.polynomial import Polynomial
from config import RelaxationOptions
from geometry.problem import ProblemSpec
from measures.registry import build_measure
from .bases import BaseBasis, MonomialBasis, get_basis

logger = logging.getLogger(__name__)


class DegreeTooSmallError(ValueError):
    """Raised when the relaxation order cannot host a constraint's localizing matrix"""

    def __init__(self, d: int, required: int):
        self.d = d
        self.required = required
        super().__init__(f"relaxation order d={d} is below the minimum order {required}")


@dataclass(frozen=True)
class PsdBlock:
    """Symmetric matrix constraint vec(M) = constant + coefficients @ x, M >= 0 (row-major vec)"""

    name: str
    size: int
    constant: np.ndarray
    coefficients: sp.csr_matrix

    def matrix(self, x: np.ndarray) -> np.ndarray:
        return (self.constant + self.coefficients @ x).reshape(self.size, self.size)


@dataclass(frozen=True)
class ConicProblem:
    """Linear objective, PSD blocks and equality rows over stacked variables y^1..y^p"""

    n: int
    d: int
    n_pieces: int
    block_length: int
    objective: np.ndarray
    psd_blocks: Tuple[PsdBlock, ...]
    eq_matrix: sp.csr_matrix
    eq_rhs: np.ndarray
    basis: str = "monomial"
    label: str = ""

    @property
    def num_variables(self) -> int:
        return self.objective.shape[0]

    @property
    def num_equalities(self) -> int:
        return self.eq_matrix.shape[0]

    def piece_slice(self, i: int) -> slice:
        return slice(i * self.block_length, (i + 1) * self.block_length)

    def check(self) -> None:
        """Raise ValueError unless every block references only declared variables"""
        nv = self.num_variables
        if self.n_pieces * self.block_length != nv:
            raise ValueError(f"{self.n_pieces} pieces of length {self.block_length} do not cover {nv} variables")
        for block in self.psd_blocks:
            if block.constant.shape != (block.size * block.size,):
                raise ValueError(f"block {block.name!r}: constant has shape {block.constant.shape}")
            if block.coefficients.shape != (block.size * block.size, nv):
                raise ValueError(f"block {block.name!r}: coefficients have shape {block.coefficients.shape}")
        if self.eq_matrix.shape != (self.eq_rhs.shape[0], nv):
            raise ValueError(f"equality matrix shape {self.eq_matrix.shape} does not match rhs {self.eq_rhs.shape}")


def constraint_order(g: Polynomial) -> int:
    """r_g = ceil(deg g / 2)"""
    return math.ceil(g.degree / 2)


def moment_matrix_map(n: int, d: int) -> np.ndarray:
    """
    Structural moment matrix: entry (a, b) is the position of exponent row_a + row_b in
    monomial_index(n, 2d)
    """
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    rows = monomial_index(n, d)
    full = monomial_index(n, 2 * d)
    k = len(rows)
    positions = np.empty((k, k), dtype=np.int64)
    for a, alpha in enumerate(rows):
        for b in range(a, k):
            target = full.index(tuple(x + y for x, y in zip(alpha, rows[b])))
            positions[a, b] = positions[b, a] = target
    return positions


def localizing_matrix_map(
    g: Polynomial,
    n: int,
    d: int,
    basis: Optional[BaseBasis] = None,
    prune_tol: float = 1e-14,
) -> sp.csr_matrix:
    """
    Coefficient matrix of the localizing matrix M_{d - r_g}(g y)

    Args:
        g: Localizing polynomial
        n: Dimension
        d: Relaxation order
        basis: Basis in which y is expressed (monomials by default)
        prune_tol: Entries with |c| below this are dropped

    Returns:
        Sparse (k*k, s(2d)) matrix, k = s(d - r_g); row a*k + b holds entry (a, b)
    """
    basis = basis or MonomialBasis()
    r_g = constraint_order(g)
    if d < r_g:
        raise DegreeTooSmallError(d, r_g)
    rows = monomial_index(n, d - r_g)
    full = monomial_index(n, 2 * d)
    k = len(rows)
    g_expansion = basis.expand(g)

    data: List[float] = []
    row_ids: List[int] = []
    col_ids: List[int] = []
    for a in range(k):
        for b in range(a, k):
            entry: Dict[tuple, float] = {}
            for e1, c1 in basis.product(rows[a], rows[b]).items():
                for gamma, cg in g_expansion.items():
                    for e2, c2 in basis.product(e1, gamma).items():
                        entry[e2] = entry.get(e2, 0.0) + c1 * cg * c2
            for exponent, value in entry.items():
                if abs(value) < prune_tol:
                    continue
                column = full.index(exponent)
                data.append(value)
                row_ids.append(a * k + b)
                col_ids.append(column)
                if a != b:
                    data.append(value)
                    row_ids.append(b * k + a)
                    col_ids.append(column)
    return sp.csr_matrix((data, (row_ids, col_ids)), shape=(k * k, len(full)))


def _place(matrix: sp.spmatrix, piece: int, n_pieces: int) -> sp.csr_matrix:
    """Embed a per-piece coefficient matrix into the stacked variable layout"""
    selector = sp.csr_matrix(([1.0], ([0], [piece])), shape=(1, n_pieces))
    return sp.kron(selector, matrix, format="csr")


def piece_constraints(spec: ProblemSpec) -> List[List[Polynomial]]:
    """Localizing polynomials per piece: the piece's own rows plus the measure's support rows"""
    support = build_measure(spec.measure, spec.n).support_constraints()
    return [list(piece.inequalities) + support for piece in spec.union.pieces]


def minimum_order(spec: ProblemSpec, objective: Optional[Polynomial] = None) -> int:
    """d_0 = max r_ij over all localizing polynomials (and ceil(deg f / 2))"""
    orders = [constraint_order(g) for rows in piece_constraints(spec) for g in rows]
    if objective is not None:
        orders.append(constraint_order(objective))
    return max(orders, default=0)


def riesz_row(polynomial: Polynomial, basis: BaseBasis, n: int, degree: int, prune_tol: float = 0.0) -> Dict[int, float]:
    """Column -> coefficient of the linear functional y -> L_y(polynomial)"""
    full = monomial_index(n, degree)
    row: Dict[int, float] = {}
    for exponent, coeff in basis.expand(polynomial).items():
        if abs(coeff) < prune_tol:
            continue
        position = full.index(exponent)
        row[position] = row.get(position, 0.0) + coeff
    return row


def build_qd(
    spec: ProblemSpec,
    d: int,
    objective: Optional[Polynomial] = None,
    options: Optional[RelaxationOptions] = None,
) -> ConicProblem:
    """
    Assemble the order-d relaxation of the union problem

    Args:
        spec: Normalized problem
        d: Relaxation order
        objective: Polynomial f integrated against every piece (default 1, the mass)
        options: Basis and pruning options

    Returns:
        ConicProblem with 1 + p + (number of localizing polynomials) PSD blocks
    """
    if not spec.normalized:
        raise ValueError("build_qd requires a normalized problem")
    options = options or RelaxationOptions()
    basis = get_basis(options.basis)
    n, p = spec.n, spec.union.p
    required = minimum_order(spec, objective)
    if d < required:
        raise DegreeTooSmallError(d, required)

    measure = build_measure(spec.measure, n)
    block_length = len(monomial_index(n, 2 * d))
    num_variables = p * block_length
    z = basis.reference_moments(measure, 2 * d)

    one = Polynomial.constant(n, 1.0)
    moment_map = localizing_matrix_map(one, n, d, basis, options.prune_tol)
    k = int(round(math.sqrt(moment_map.shape[0])))

    blocks: List[PsdBlock] = [
        PsdBlock(
            "reference",
            k,
            np.asarray(moment_map @ z).ravel(),
            sp.hstack([-moment_map] * p, format="csr"),
        )
    ]
    for i in range(p):
        blocks.append(PsdBlock(f"moment[{i}]", k, np.zeros(k * k), _place(moment_map, i, p)))
    for i, rows in enumerate(piece_constraints(spec)):
        for j, g in enumerate(rows):
            local = localizing_matrix_map(g, n, d, basis, options.prune_tol)
            size = int(round(math.sqrt(local.shape[0])))
            blocks.append(PsdBlock(f"localizing[{i},{j}]", size, np.zeros(size * size), _place(local, i, p)))

    f = objective if objective is not None else one
    f_row = riesz_row(f, basis, n, 2 * d, options.prune_tol)
    c = np.zeros(num_variables)
    for i in range(p):
        for position, value in f_row.items():
            c[i * block_length + position] = value

    problem = ConicProblem(
        n=n,
        d=d,
        n_pieces=p,
        block_length=block_length,
        objective=c,
        psd_blocks=tuple(blocks),
        eq_matrix=sp.csr_matrix((0, num_variables)),
        eq_rhs=np.zeros(0),
        basis=basis.name,
        label=f"{spec.name} d={d}",
    )
    logger.info(
        "Built relaxation %r: %d PSD blocks, %d variables, basis=%s",
        problem.label,
        len(blocks),
        num_variables,
        basis.name,
    )
    return problem


def with_equalities(problem: ConicProblem, matrix: sp.csr_matrix, rhs: np.ndarray, label: str = "") -> ConicProblem:
    """Copy of a problem with extra equality rows appended"""
    return replace(
        problem,
        eq_matrix=sp.vstack([problem.eq_matrix, matrix], format="csr"),
        eq_rhs=np.concatenate([problem.eq_rhs, rhs]),
        label=label or problem.label,
    )

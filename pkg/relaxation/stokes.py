"""
Stokes constraints for Moment Bounds
Integration by parts against test functions vanishing on the boundary of the union
gives linear equalities L_{y^i}(p_{alpha,k}) = 0 on every piece, with

    p_{alpha,k} = q * d_k(x^alpha g) + 2 x^alpha g * d_k q + x^alpha g q * d_k r

where g is the product of all constraint polynomials and q * exp(r) the density.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp

from algebra.monomials import monomial_index
from algebra.polynomial import Exponent, Polynomial
from config import RelaxationOptions
from geometry.problem import ProblemSpec
from measures.registry import build_measure
from .bases import get_basis
from .builder import ConicProblem, build_qd, piece_constraints, riesz_row, with_equalities

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StokesConstraint:
    """One equality row L_{y^piece}(polynomial) = 0"""

    piece: int
    alpha: Exponent
    k: int
    polynomial: Polynomial
    row: Dict[int, float]


def stokes_product(spec: ProblemSpec, dedup: bool = True) -> Polynomial:
    """Product of every constraint polynomial of the union, optionally without repeats"""
    factors: List[Polynomial] = []
    seen = set()
    for rows in piece_constraints(spec):
        for g in rows:
            if dedup:
                key = g.term_key()
                if key in seen:
                    continue
                seen.add(key)
            factors.append(g)
    product = Polynomial.constant(spec.n, 1.0)
    for g in factors:
        product = product * g
    return product


def stokes_polynomials(
    spec: ProblemSpec, d: int, options: Optional[RelaxationOptions] = None
) -> List[StokesConstraint]:
    """
    Generate the Stokes rows of the order-d relaxation

    Args:
        spec: Normalized problem
        d: Relaxation order
        options: Gate, dedup, basis and pruning options

    Returns:
        One constraint per (piece, alpha, k) whose polynomial is nonzero and fits the gate
    """
    if not spec.normalized:
        raise ValueError("stokes_polynomials requires a normalized problem")
    options = options or RelaxationOptions()
    basis = get_basis(options.basis)
    n, top = spec.n, 2 * d
    q, r = build_measure(spec.measure, n).density_factors()
    g = stokes_product(spec, options.stokes_dedup)
    dq = [q.diff(k) for k in range(n)]
    dr = [r.diff(k) for k in range(n)]

    constraints: List[StokesConstraint] = []
    for alpha in monomial_index(n, top):
        weighted = Polynomial.monomial(n, alpha) * g
        test_function = weighted * q
        if options.stokes_gate == "test_function" and test_function.degree > top:
            continue
        for k in range(n):
            p = q * weighted.diff(k) + 2.0 * weighted * dq[k] + test_function * dr[k]
            if p.is_zero or p.degree > top:
                continue
            row = riesz_row(p, basis, n, top, options.prune_tol)
            if not row:
                continue
            for i in range(spec.union.p):
                constraints.append(StokesConstraint(i, alpha, k, p, row))
    logger.debug("Generated %d Stokes rows at d=%d (deg g = %d)", len(constraints), d, g.degree)
    return constraints


def stokes_rows(constraints: List[StokesConstraint], problem: ConicProblem) -> sp.csr_matrix:
    """Assemble constraints into a sparse equality matrix over the stacked variables"""
    data, rows, cols = [], [], []
    for index, constraint in enumerate(constraints):
        offset = constraint.piece * problem.block_length
        for position, value in constraint.row.items():
            data.append(value)
            rows.append(index)
            cols.append(offset + position)
    return sp.csr_matrix((data, (rows, cols)), shape=(len(constraints), problem.num_variables))


def build_qd_stokes(spec: ProblemSpec, d: int, options: Optional[RelaxationOptions] = None) -> ConicProblem:
    """build_qd with f = 1 plus every Stokes row"""
    base = build_qd(spec, d, None, options)
    constraints = stokes_polynomials(spec, d, options)
    if not constraints:
        return base
    matrix = stokes_rows(constraints, base)
    logger.info("Added %d Stokes rows to %r", len(constraints), base.label)
    return with_equalities(base, matrix, np.zeros(len(constraints)), label=f"{base.label} stokes")

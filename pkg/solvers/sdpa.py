"""
SDPA sparse format (.dat-s) writer and reader for Moment Bounds

The relaxation   maximize b^T y  s.t.  C_j + sum_i y_i A_{j,i} >= 0,  E y = e
is written as SDPA's   minimize c^T x  s.t.  sum_i x_i F_i - F_0 >= 0
with c = -b, F_0 = -C and F_i = A_i. Each equality row a^T y = e becomes two
diagonal entries of one trailing LP block (a^T y - e >= 0 and e - a^T y >= 0).
Entries are listed as "matno block i j value" (upper triangle, 1-based) and
values are printed with repr() so identical problems give identical files.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import scipy.sparse as sp

from relaxation.builder import ConicProblem

logger = logging.getLogger(__name__)

Entry = Tuple[int, int, int, int, float]


@dataclass
class SdpaProblem:
    """Parsed contents of an SDPA sparse file"""

    num_variables: int
    block_struct: List[int]
    c: np.ndarray
    entries: List[Entry] = field(default_factory=list)

    @property
    def num_blocks(self) -> int:
        return len(self.block_struct)


def _fmt(value: float) -> str:
    value = float(value)
    if value == 0.0:
        value = 0.0
    return repr(value)


def format_sdpa(problem: ConicProblem) -> str:
    """Render a ConicProblem as SDPA sparse text"""
    problem.check()
    m = problem.num_variables
    blocks = problem.psd_blocks
    n_eq = problem.num_equalities
    block_struct = [block.size for block in blocks] + ([-2 * n_eq] if n_eq else [])

    lines = [
        f"* moment-bounds relaxation {problem.label}".rstrip(),
        f"{m} = mDIM",
        f"{len(block_struct)} = nBLOCK",
        " ".join(str(size) for size in block_struct) + " = bLOCKsTRUCT",
        " ".join(_fmt(-value) for value in problem.objective),
    ]

    # F_0
    for number, block in enumerate(blocks, start=1):
        constant = block.constant.reshape(block.size, block.size)
        for i in range(block.size):
            for j in range(i, block.size):
                if constant[i, j] != 0.0:
                    lines.append(f"0 {number} {i + 1} {j + 1} {_fmt(-constant[i, j])}")
    lp_number = len(blocks) + 1
    for row, rhs in enumerate(problem.eq_rhs):
        if rhs != 0.0:
            lines.append(f"0 {lp_number} {2 * row + 1} {2 * row + 1} {_fmt(rhs)}")
            lines.append(f"0 {lp_number} {2 * row + 2} {2 * row + 2} {_fmt(-rhs)}")

    # F_i
    columns = [sp.csc_matrix(block.coefficients) for block in blocks]
    eq_columns = sp.csc_matrix(problem.eq_matrix)
    for variable in range(m):
        for number, (block, matrix) in enumerate(zip(blocks, columns), start=1):
            start, stop = matrix.indptr[variable], matrix.indptr[variable + 1]
            upper = {}
            for position, value in zip(matrix.indices[start:stop], matrix.data[start:stop]):
                i, j = divmod(int(position), block.size)
                if i <= j and value != 0.0:
                    upper[(i, j)] = float(value)
            for (i, j) in sorted(upper):
                lines.append(f"{variable + 1} {number} {i + 1} {j + 1} {_fmt(upper[(i, j)])}")
        if n_eq:
            start, stop = eq_columns.indptr[variable], eq_columns.indptr[variable + 1]
            pairs = sorted(zip(eq_columns.indices[start:stop].tolist(), eq_columns.data[start:stop].tolist()))
            for row, value in pairs:
                if value == 0.0:
                    continue
                lines.append(f"{variable + 1} {lp_number} {2 * row + 1} {2 * row + 1} {_fmt(value)}")
                lines.append(f"{variable + 1} {lp_number} {2 * row + 2} {2 * row + 2} {_fmt(-value)}")
    return "\n".join(lines) + "\n"


def export_sdpa(problem: ConicProblem, path: Union[str, Path]) -> Path:
    """Write a ConicProblem to an SDPA sparse file; I/O errors propagate"""
    path = Path(path)
    path.write_text(format_sdpa(problem), encoding="ascii")
    logger.info("Exported %r to %s", problem.label, path)
    return path


_SEPARATORS = re.compile(r"[,(){}]")


def _data_lines(text: str) -> List[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] in "*\"":
            continue
        lines.append(_SEPARATORS.sub(" ", line))
    return lines


def read_sdpa(path: Union[str, Path]) -> SdpaProblem:
    """Parse an SDPA sparse file (header, block structure, objective, entries)"""
    lines = _data_lines(Path(path).read_text(encoding="ascii"))
    if len(lines) < 4:
        raise ValueError(f"{path}: truncated SDPA file")
    m = int(lines[0].split()[0])
    n_blocks = int(lines[1].split()[0])
    block_struct = [int(token) for token in lines[2].split()[:n_blocks]]
    c = np.array([float(token) for token in lines[3].split()[:m]])
    entries: List[Entry] = []
    for line in lines[4:]:
        tokens = line.split()
        if len(tokens) < 5:
            raise ValueError(f"{path}: malformed entry line {line!r}")
        entries.append((int(tokens[0]), int(tokens[1]), int(tokens[2]), int(tokens[3]), float(tokens[4])))
    return SdpaProblem(m, block_struct, c, entries)

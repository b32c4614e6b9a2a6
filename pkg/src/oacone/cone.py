"""The integer cone whose lattice points are the OAs of strength t.

The constraint matrix has one row per non-reference cell of every t-factor
marginal: (indicator of the cell) - (indicator of the lexicographically first
cell of that marginal).  y >= 0 satisfies all rows exactly when every
t-marginal of y is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .counting import CountingVector
from .design import DesignSpace
from .errors import DesignMismatchError

__all__ = ["ConstraintMatrix", "constraint_matrix", "is_member", "write_matrix", "read_matrix"]


@dataclass(frozen=True)
class ConstraintMatrix:
    design: DesignSpace
    strength: int
    rows: np.ndarray  # (R, #D) int8, entries in {-1, 0, +1}

    @property
    def row_count(self) -> int:
        return self.rows.shape[0]


def constraint_matrix(design: DesignSpace, t: int) -> ConstraintMatrix:
    """Marginal-constancy equality rows for every t-subset of factors."""
    if not 1 <= t <= design.m:
        raise ValueError(f"strength {t} out of range for m={design.m}")
    pts = design.point_array
    rows = []
    for subset in combinations(range(design.m), t):
        cells = list(product(*(range(design.levels[j]) for j in subset)))
        reference = cells[0]
        ref_row = np.all(pts[:, subset] == np.array(reference), axis=1)
        for cell in cells[1:]:
            in_cell = np.all(pts[:, subset] == np.array(cell), axis=1)
            rows.append(in_cell.astype(np.int8) - ref_row.astype(np.int8))
    mat = np.array(rows, dtype=np.int8)
    mat.flags.writeable = False
    return ConstraintMatrix(design, t, mat)


def is_member(y: CountingVector | np.ndarray, matrix: ConstraintMatrix) -> bool:
    """True iff M y = 0 and y >= 0 entrywise."""
    arr = y.y if isinstance(y, CountingVector) else np.asarray(y, dtype=np.int64)
    if arr.shape != (matrix.design.card,):
        raise DesignMismatchError(
            f"vector length {arr.shape} does not match #D={matrix.design.card}"
        )
    if (arr < 0).any():
        return False
    return not (matrix.rows.astype(np.int64) @ arr).any()


def write_matrix(matrix: ConstraintMatrix, path) -> None:
    """Whitespace format: "rows cols" header, then one row per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{matrix.row_count} {matrix.design.card}\n")
        for row in matrix.rows:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_matrix(path) -> np.ndarray:
    """Read a matrix in the same whitespace format (cross-validation helper)."""
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"matrix file {path} is missing its header")
    r, c = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != r * c:
        raise ValueError(f"matrix file {path} has {len(body)} entries, expected {r * c}")
    return np.array(body, dtype=np.int64).reshape(r, c)

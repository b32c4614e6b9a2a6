"""Hilbert bases of OA cones: computation, verification, decomposition, files.

The basis of {y in N^#D : M y = 0} is the unique inclusion-minimal set of
nonzero lattice points generating every member as an N-combination.  Elements
are kept in canonical order: run size ascending, then lexicographic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _search
from .cone import ConstraintMatrix, constraint_matrix, is_member
from .counting import CountingVector
from .design import DesignSpace
from .errors import DesignMismatchError, FileFormatError, NotAMemberError

__all__ = [
    "HilbertBasis",
    "hilbert_basis",
    "verify_minimality",
    "decompose",
    "write_basis",
    "read_basis",
]


@dataclass(frozen=True)
class HilbertBasis:
    design: DesignSpace
    strength: int
    elements: np.ndarray  # (r, #D) int64, canonical order

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    @property
    def sizes(self) -> np.ndarray:
        return self.elements.sum(axis=1)

    def size_histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.sizes, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def counting_vectors(self) -> list[CountingVector]:
        return [CountingVector(self.design, row) for row in self.elements]


def _canonical_order(elements: np.ndarray) -> np.ndarray:
    arr = np.asarray(elements, dtype=np.int64)
    order = np.lexsort(np.vstack([arr[:, ::-1].T, arr.sum(axis=1)]))
    return arr[order]


def hilbert_basis(
    matrix: ConstraintMatrix,
    budget: int = _search.DEFAULT_BUDGET,
    method: str = "auto",
    progress=None,
) -> HilbertBasis:
    """Compute the Hilbert basis of the cone defined by a constraint matrix.

    method:
      "auto" - fiber-lift recursion for all-binary designs, unit-step
               completion otherwise
      "lift" - force the fiber-lift recursion (binary designs only)
      "unit" - force the unit-step completion (any design)

    Raises BudgetExceededError (carrying the frontier size) instead of ever
    returning a truncated basis.
    """
    design = matrix.design
    if method not in ("auto", "lift", "unit"):
        raise ValueError(f"unknown method {method!r}")
    if method == "lift" and not (design.is_binary and design.card <= 64):
        raise ValueError(
            "the fiber-lift recursion only applies to binary designs with at "
            "most 64 cells"
        )
    if method == "auto":
        method = "lift" if design.is_binary and design.card <= 64 else "unit"
    if method == "lift":
        elements = _search.binary_basis_recursive(
            design.m, matrix.strength, budget=budget, progress=progress
        )
    else:
        elements = _search.minimal_solutions_unit(
            np.asarray(matrix.rows, dtype=np.int64), budget=budget
        )
    ordered = _canonical_order(elements)
    ordered.flags.writeable = False
    return HilbertBasis(design, matrix.strength, ordered)


def verify_minimality(basis: HilbertBasis) -> bool:
    """True iff no element coordinatewise dominates another element.

    Sound and complete for this monoid: if b' <= b elementwise then b - b'
    is again a member (differences of members stay in the kernel and stay
    nonnegative), so b would decompose; conversely any proper decomposition
    summand of b is a sum of basis elements, each of which it dominates.
    """
    if basis.elements.size and basis.elements.max() > 255:
        raise ValueError("multiplicities beyond 255 are not supported here")
    arr = basis.elements.astype(np.uint8)
    sizes = basis.sizes
    if len(arr) != len(_dedup_view(arr)):
        return False
    for size in np.unique(sizes):
        batch = np.ascontiguousarray(arr[sizes == size])
        smaller = np.ascontiguousarray(arr[sizes < size])
        if not len(smaller):
            continue
        mask = np.zeros(len(batch), dtype=np.bool_)
        _search._dominated_masked(
            batch, _search._support_masks(batch),
            smaller, _search._support_masks(smaller), mask,
        )
        if mask.any():
            return False
    return True


def _dedup_view(arr: np.ndarray) -> np.ndarray:
    keys = np.ascontiguousarray(arr).view(np.dtype((np.void, arr.shape[1])))[:, 0]
    return np.unique(keys)


def decompose(
    y: CountingVector | np.ndarray,
    basis: HilbertBasis,
) -> dict[int, int]:
    """Some decomposition of y over the basis: {element index: coefficient}.

    Decompositions are not unique; the search is greedy over elements in
    descending run size with backtracking.  Raises NotAMemberError when y is
    not a member of the cone.
    """
    arr = y.y if isinstance(y, CountingVector) else np.asarray(y, dtype=np.int64)
    matrix = constraint_matrix(basis.design, basis.strength)
    if not is_member(arr, matrix):
        raise NotAMemberError("vector is not a member of the cone")
    if not arr.any():
        return {}
    order = np.argsort(basis.sizes, kind="stable")[::-1]
    elements = basis.elements[order]
    sizes = basis.sizes[order]

    reachable = _reachable_sums(sorted(set(int(s) for s in sizes)), int(arr.sum()))

    target = arr.copy()
    solution: dict[int, int] = {}

    def search(start: int, remaining: np.ndarray, left: int) -> bool:
        if left == 0:
            return True
        if not reachable[left]:
            return False
        for idx in range(start, len(elements)):
            element = elements[idx]
            if sizes[idx] > left:
                continue
            if (element <= remaining).all():
                cap = int((remaining[element > 0] // element[element > 0]).min())
                for coeff in range(cap, 0, -1):
                    solution[idx] = coeff
                    if search(idx + 1, remaining - coeff * element,
                              left - coeff * int(sizes[idx])):
                        return True
                del solution[idx]
        return False

    if not search(0, target, int(arr.sum())):
        # cannot happen for a true member with a complete basis
        raise NotAMemberError("no decomposition found over the supplied basis")
    return {int(order[idx]): coeff for idx, coeff in solution.items()}


def _reachable_sums(sizes: list[int], limit: int) -> np.ndarray:
    ok = np.zeros(limit + 1, dtype=bool)
    ok[0] = True
    for value in range(1, limit + 1):
        for s in sizes:
            if s > value:
                break
            if ok[value - s]:
                ok[value] = True
                break
    return ok


def write_basis(basis: HilbertBasis, path) -> None:
    """Plain text: header "r #D", then r rows of #D integers, canonical order."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{len(basis)} {basis.design.card}\n")
        for row in basis.elements:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_basis(path, design: DesignSpace, strength: int) -> HilbertBasis:
    """Read a basis file, validating dimensions and nonnegativity."""
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise FileFormatError(f"basis file {path} is missing its header")
    try:
        count, card = int(tokens[0]), int(tokens[1])
        body = [int(v) for v in tokens[2:]]
    except ValueError as exc:
        raise FileFormatError(f"basis file {path} has non-integer entries") from exc
    if card != design.card:
        raise DesignMismatchError(
            f"basis file is over {card} cells, design has {design.card}"
        )
    if len(body) != count * card:
        raise FileFormatError(
            f"basis file {path} has {len(body)} entries, expected {count * card}"
        )
    arr = np.array(body, dtype=np.int64).reshape(count, card)
    if (arr < 0).any():
        raise FileFormatError(f"basis file {path} contains negative multiplicities")
    ordered = _canonical_order(arr)
    ordered.flags.writeable = False
    return HilbertBasis(design, strength, ordered)

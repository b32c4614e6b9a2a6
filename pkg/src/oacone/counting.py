"""Counting vectors, counting-function coefficients, marginals, and OA strength.

A fraction is held as its counting vector: nonnegative integer multiplicities
over the full design in lexicographic point order.  Its counting function has
one complex coefficient per exponent tuple; we store them scaled by #D, which
keeps every binary-design computation in exact integer arithmetic (the true
coefficient c_alpha is scaled[alpha]/#D).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .design import DesignSpace
from .errors import (
    DesignMismatchError,
    EmptyFractionError,
    NotACountingFunctionError,
)

__all__ = [
    "CountingVector",
    "CoefficientTable",
    "MarginalTable",
    "coefficients_from_counts",
    "counts_from_coefficients",
    "marginal_counts",
    "strength",
    "is_oa",
    "is_oa_by_marginals",
]

RECONSTRUCTION_TOL = 1e-6   # counts farther than this from an integer are rejected
SPECTRAL_TOL = 1e-9         # |c_alpha| below this counts as zero (mixed levels)


class CountingVector:
    """A fraction as multiplicities over the full design (lexicographic order)."""

    __slots__ = ("design", "y", "n")

    def __init__(self, design: DesignSpace, y):
        arr = np.asarray(y, dtype=np.int64)
        if arr.shape != (design.card,):
            raise DesignMismatchError(
                f"counting vector has length {arr.shape}, design needs {design.card}"
            )
        if (arr < 0).any():
            raise ValueError("counting vector entries must be nonnegative")
        arr = arr.copy()
        arr.flags.writeable = False
        self.design = design
        self.y = arr
        self.n = int(arr.sum())

    @classmethod
    def from_points(cls, design: DesignSpace, runs) -> "CountingVector":
        """Build from a run list (points, repeats allowed)."""
        y = np.zeros(design.card, dtype=np.int64)
        for point in runs:
            y[design.index_of(tuple(point))] += 1
        return cls(design, y)

    @classmethod
    def full_factorial(cls, design: DesignSpace) -> "CountingVector":
        return cls(design, np.ones(design.card, dtype=np.int64))

    def is_single_replicate(self) -> bool:
        return bool((self.y <= 1).all())

    def multiplicity(self, point: tuple[int, ...]) -> int:
        return int(self.y[self.design.index_of(point)])

    def key(self) -> bytes:
        """Hashable identity of this fraction (used for catalog dedup)."""
        return self.y.astype(np.int64).tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CountingVector)
            and self.design == other.design
            and np.array_equal(self.y, other.y)
        )

    def __hash__(self) -> int:
        return hash((self.design, self.key()))

    def __repr__(self) -> str:
        return f"CountingVector(design={self.design.levels}, n={self.n})"


@dataclass(frozen=True)
class CoefficientTable:
    """All #D counting-function coefficients, scaled by #D.

    For binary designs ``scaled`` is an integer vector and the table is
    exact; otherwise it is complex128 and comparisons use SPECTRAL_TOL.
    """

    design: DesignSpace
    scaled: np.ndarray

    @property
    def exact(self) -> bool:
        return not np.iscomplexobj(self.scaled)

    @property
    def c0(self):
        """c_0 = n/#D."""
        return self[tuple([0] * self.design.m)]

    def __getitem__(self, alpha: tuple[int, ...]):
        idx = self.design.index_of(tuple(alpha))
        if self.exact:
            return Fraction(int(self.scaled[idx]), self.design.card)
        return complex(self.scaled[idx]) / self.design.card

    def run_size(self) -> int:
        """n, read off the constant coefficient."""
        zero = int(round(float(np.real(self.scaled[0]))))
        return zero

    def is_zero(self, idx: int) -> bool:
        if self.exact:
            return self.scaled[idx] == 0
        return abs(self.scaled[idx]) <= SPECTRAL_TOL * self.design.card


@dataclass(frozen=True)
class MarginalTable:
    """Projection counts of a fraction onto a factor subset I."""

    subset: tuple[int, ...]
    counts: dict[tuple[int, ...], int]

    def is_constant(self) -> bool:
        values = set(self.counts.values())
        return len(values) == 1

    def total(self) -> int:
        return sum(self.counts.values())


def coefficients_from_counts(y: CountingVector) -> CoefficientTable:
    """Coefficients of the counting function: c_alpha = (1/#D) sum_F conj(X^alpha)."""
    X = y.design.character_matrix
    if y.design.is_binary:
        scaled = X.astype(np.int64).T @ y.y
    else:
        scaled = X.conj().T @ y.y.astype(np.complex128)
    scaled.flags.writeable = False
    return CoefficientTable(y.design, scaled)


def counts_from_coefficients(table: CoefficientTable) -> CountingVector:
    """Evaluate R at every design point; reject tables that are not counting functions."""
    design = table.design
    X = design.character_matrix
    if table.exact:
        values = X.astype(np.int64) @ table.scaled
        counts, rem = np.divmod(values, design.card)
        if rem.any():
            raise NotACountingFunctionError("reconstructed values are not integers")
    else:
        values = X @ table.scaled / design.card
        if np.abs(values.imag).max(initial=0.0) > RECONSTRUCTION_TOL:
            raise NotACountingFunctionError("reconstructed values are not real")
        counts = np.round(values.real).astype(np.int64)
        if np.abs(values.real - counts).max(initial=0.0) > RECONSTRUCTION_TOL:
            raise NotACountingFunctionError("reconstructed values are not integers")
    if (counts < 0).any():
        raise NotACountingFunctionError("reconstructed values are negative")
    return CountingVector(design, counts)


def marginal_counts(y: CountingVector, subset) -> MarginalTable:
    """Counts of the projection onto the I-factors (1-based factor indices)."""
    design = y.design
    subset = tuple(subset)
    if not subset:
        raise ValueError("factor subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"factor subset {subset} has repeated indices")
    if any(not 1 <= j <= design.m for j in subset):
        raise ValueError(f"factor subset {subset} out of range for m={design.m}")
    cols = [j - 1 for j in subset]
    proj = design.point_array[:, cols]
    counts: dict[tuple[int, ...], int] = {}
    for cell in product(*(range(design.levels[c]) for c in cols)):
        counts[cell] = 0
    for row, weight in zip(proj, y.y):
        counts[tuple(int(v) for v in row)] += int(weight)
    return MarginalTable(subset, counts)


def strength(y: CountingVector) -> int:
    """Largest t such that every coefficient of order 1..t vanishes.

    Returns m for (multiples of) the full factorial.  The empty fraction has
    no defined strength.
    """
    if y.n == 0:
        raise EmptyFractionError("strength of the empty fraction is undefined")
    table = coefficients_from_counts(y)
    weights = y.design.exponent_weights
    if y.design.is_binary:
        nonzero = table.scaled != 0
    else:
        nonzero = np.abs(table.scaled) > SPECTRAL_TOL * y.design.card
    bad = weights[nonzero & (weights > 0)]
    if bad.size == 0:
        return y.design.m
    return int(bad.min()) - 1


def is_oa(y: CountingVector, t: int) -> bool:
    """Spectral test: is the fraction an OA of strength t?"""
    if not 0 <= t <= y.design.m:
        raise ValueError(f"strength {t} out of range for m={y.design.m}")
    if t == 0:
        return y.n >= 1
    return strength(y) >= t

def is_oa_by_marginals(y: CountingVector, t: int) -> bool:
    """Combinatorial test: every t-factor marginal table is constant.

    Independent of the coefficient route; the two must agree (Prop.-2-style
    cross oracle, exercised in the tests).
    """
    if not 0 <= t <= y.design.m:
        raise ValueError(f"strength {t} out of range for m={y.design.m}")
    if t == 0:
        return y.n >= 1
    from itertools import combinations

    for subset in combinations(range(1, y.design.m + 1), t):
        if not marginal_counts(y, subset).is_constant():
            return False
    return True

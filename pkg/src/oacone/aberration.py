"""Aberrations, generalized word-length patterns, GMA comparison, and bounds.

Binary designs are handled in exact rational arithmetic throughout: a GWLP
entry is Fraction(sum of squared scaled coefficients, n^2), never a float.
Mixed-level designs fall back to double precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .counting import CoefficientTable, CountingVector, coefficients_from_counts, strength
from .design import DesignSpace
from .errors import EmptyFractionError, StrengthPreconditionError

__all__ = [
    "Gwlp",
    "AberrationTable",
    "GmaOrder",
    "aberration_table",
    "aberration_via_outer_product",
    "gwlp",
    "gwlp_from_coefficients",
    "gma_compare",
    "total_aberration",
    "last_term_formula",
    "last_term_lower_bound",
    "aggregated_lower_bound",
]


@dataclass(frozen=True)
class Gwlp:
    """The vector (A_0, ..., A_m); entries are Fractions or floats."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))

    def __getitem__(self, j: int):
        return self.a[j]

    def __len__(self) -> int:
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    @property
    def m(self) -> int:
        return len(self.a) - 1

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.a)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{float(v):g}" for v in self.a) + ")"


@dataclass(frozen=True)
class AberrationTable:
    """a_alpha = (|c_alpha| / c_0)^2 for every exponent index."""

    design: DesignSpace
    n: int
    squared_norms: np.ndarray  # |scaled c_alpha|^2: int64 (binary) or float64

    @property
    def exact(self) -> bool:
        return not np.issubdtype(self.squared_norms.dtype, np.floating)

    def __getitem__(self, alpha: tuple[int, ...]):
        idx = self.design.index_of(tuple(alpha))
        if self.exact:
            return Fraction(int(self.squared_norms[idx]), self.n ** 2)
        return float(self.squared_norms[idx]) / self.n ** 2

    def gwlp(self) -> Gwlp:
        weights = self.design.exponent_weights
        out = []
        for j in range(self.design.m + 1):
            total = self.squared_norms[weights == j].sum()
            if self.exact:
                out.append(Fraction(int(total), self.n ** 2))
            else:
                out.append(float(total) / self.n ** 2)
        return Gwlp(tuple(out))


class GmaOrder(enum.Enum):
    BETTER = "better"
    WORSE = "worse"
    EQUAL = "equal"


def aberration_table(table: CoefficientTable) -> AberrationTable:
    """Aberrations from a coefficient table; requires a nonempty fraction."""
    n = table.run_size()
    if n <= 0:
        raise EmptyFractionError("aberrations are undefined for the empty fraction")
    if table.exact:
        sq = table.scaled.astype(np.int64) ** 2
    else:
        sq = np.abs(table.scaled) ** 2
    # scaled = #D * c_alpha and c_0 = n/#D, so (|c|/c_0)^2 = |scaled|^2 / n^2
    return AberrationTable(table.design, n, sq)


def aberration_via_outer_product(y: CountingVector, alpha: tuple[int, ...]):
    """a_alpha computed as Y^T conj(X_alpha) X_alpha^T Y / n^2.

    Cross-check path for the coefficient route; exact for binary designs.
    """
    if y.n == 0:
        raise EmptyFractionError("aberrations are undefined for the empty fraction")
    design = y.design
    idx = design.index_of(tuple(alpha))
    col = design.character_matrix[:, idx]
    if design.is_binary:
        quad = int(y.y @ np.outer(col.astype(np.int64), col.astype(np.int64)) @ y.y)
        return Fraction(quad, y.n ** 2)
    quad = np.real(y.y @ np.outer(col.conj(), col) @ y.y)
    return float(quad) / y.n ** 2


def gwlp(y: CountingVector) -> Gwlp:
    """Generalized word-length pattern (A_0, ..., A_m) of a fraction."""
    return aberration_table(coefficients_from_counts(y)).gwlp()


def gwlp_from_coefficients(table: CoefficientTable) -> Gwlp:
    return aberration_table(table).gwlp()


def gma_compare(a: Gwlp, b: Gwlp) -> GmaOrder:
    """Lexicographic comparison of (A_1, ..., A_m); smaller is better."""
    if len(a) != len(b):
        raise ValueError(f"GWLP lengths differ: {len(a)} vs {len(b)}")
    for va, vb in zip(a.a[1:], b.a[1:]):
        if va < vb:
            return GmaOrder.BETTER
        if va > vb:
            return GmaOrder.WORSE
    return GmaOrder.EQUAL


def total_aberration(y: CountingVector):
    """sum_j A_j = #D * sum(Y^2) / n^2 (closed form)."""
    if y.n == 0:
        raise EmptyFractionError("total aberration is undefined for the empty fraction")
    num = y.design.card * int((y.y.astype(object) ** 2).sum())
    return Fraction(num, y.n ** 2)


def last_term_formula(y: CountingVector):
    """A_m for an OA of strength m-1: (#D sum(Y^2) - n^2) / n^2.

    The precondition is checked; it is not valid for lower-strength inputs.
    """
    if y.n == 0:
        raise EmptyFractionError("the empty fraction has no word-length pattern")
    m = y.design.m
    t = strength(y)
    if t < m - 1:
        raise StrengthPreconditionError(
            f"closed form needs an OA of strength {m - 1}, input has strength {t}"
        )
    num = y.design.card * int((y.y.astype(object) ** 2).sum()) - y.n ** 2
    return Fraction(num, y.n ** 2)


def last_term_lower_bound(design: DesignSpace, n: int):
    """Lower bound r(#D - r)/n^2 for A_m over OA(n, design, m-1)."""
    if n < 1:
        raise ValueError("run size must be at least 1")
    r = n % design.card
    return Fraction(r * (design.card - r), n ** 2)


def aggregated_lower_bound(design: DesignSpace, t: int, n: int):
    """Lower bound for A_{t+1}: sum of the closed-form bounds over all
    (t+1)-factor subdesigns."""
    if not 0 <= t < design.m:
        raise ValueError(f"need t + 1 <= m, got t={t}, m={design.m}")
    if n < 1:
        raise ValueError("run size must be at least 1")
    total = Fraction(0)
    for subset in combinations(design.levels, t + 1):
        sub_card = math.prod(subset)
        r = n % sub_card
        total += Fraction(r * (sub_card - r), n ** 2)
    return total

"""Multiset union of fractions and the direct GWLP-of-union formula.

The union of fractions is the entrywise sum of their counting vectors; its
counting function is the sum of the parts' counting functions.  union_gwlp
evaluates the word-length pattern of the union from the parts' cached
coefficient tables alone, without ever forming the union vector:

    A_j(F) = sum_i (n_i/n)^2 A_j(F_i)
             + 2 (#D/n)^2 sum_{i1<i2} sum_{|alpha|_0=j} Re(c^(i1) conj(c^(i2)))

which for binary designs is exact integer arithmetic over n^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .aberration import Gwlp, gwlp_from_coefficients
from .counting import CoefficientTable, CountingVector, coefficients_from_counts
from .design import DesignSpace
from .errors import DesignMismatchError

__all__ = [
    "FractionSummary",
    "summarize",
    "union_counts",
    "union_gwlp",
    "cross_covariance",
    "replicate",
]


@dataclass(frozen=True)
class FractionSummary:
    """Cached run size, coefficient table, and GWLP of one fraction."""

    n: int
    coefficients: CoefficientTable
    gwlp: Gwlp

    @property
    def design(self) -> DesignSpace:
        return self.coefficients.design


def summarize(y: CountingVector) -> FractionSummary:
    table = coefficients_from_counts(y)
    return FractionSummary(y.n, table, gwlp_from_coefficients(table))


def union_counts(parts: list[CountingVector]) -> CountingVector:
    """Entrywise sum (multiset union) of counting vectors on one design."""
    if not parts:
        raise ValueError("need at least one fraction")
    design = parts[0].design
    for p in parts[1:]:
        design.check_same(p.design)
    total = np.zeros(design.card, dtype=np.int64)
    for p in parts:
        total += p.y
    return CountingVector(design, total)


def cross_covariance(a: FractionSummary, b: FractionSummary, j: int):
    """sum over |alpha|_0 = j of Re(c_alpha^(a) conj(c_alpha^(b))).

    For binary designs this is the covariance-like term of the union formula,
    returned as an exact Fraction with denominator #D^2.
    """
    a.design.check_same(b.design)
    weights = a.design.exponent_weights
    sel = weights == j
    if a.coefficients.exact and b.coefficients.exact:
        dot = int(a.coefficients.scaled[sel] @ b.coefficients.scaled[sel])
        return Fraction(dot, a.design.card ** 2)
    dot = np.real(a.coefficients.scaled[sel] @ np.conj(b.coefficients.scaled[sel]))
    return float(dot) / a.design.card ** 2


def union_gwlp(parts: list[FractionSummary]) -> Gwlp:
    """GWLP of the union straight from the parts' coefficient tables."""
    if len(parts) < 2:
        raise ValueError("a union needs at least two fractions")
    design = parts[0].design
    for p in parts[1:]:
        design.check_same(p.design)
    n = sum(p.n for p in parts)
    m = design.m
    exact = all(p.coefficients.exact for p in parts)
    out = []
    for j in range(m + 1):
        if exact:
            acc = Fraction(0)
            for p in parts:
                acc += Fraction(p.n ** 2) * p.gwlp[j]
            for i1 in range(len(parts)):
                for i2 in range(i1 + 1, len(parts)):
                    cov = cross_covariance(parts[i1], parts[i2], j)
                    acc += 2 * design.card ** 2 * cov
            out.append(acc / n ** 2)
        else:
            acc = 0.0
            for p in parts:
                acc += p.n ** 2 * float(p.gwlp[j])
            for i1 in range(len(parts)):
                for i2 in range(i1 + 1, len(parts)):
                    acc += 2 * design.card ** 2 * cross_covariance(parts[i1], parts[i2], j)
            out.append(acc / n ** 2)
    return Gwlp(tuple(out))


def replicate(y: CountingVector, nu: int) -> CountingVector:
    """nu copies of every run; the aberration table is unchanged."""
    if nu < 1:
        raise ValueError("replication factor must be a positive integer")
    return CountingVector(y.design, y.y * nu)

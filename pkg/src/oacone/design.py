"""Mixed-level full factorial designs with roots-of-unity level coding.

Points and exponent tuples both live in Z_{s_1} x ... x Z_{s_m} and are
enumerated lexicographically with factor 1 most significant, so index i
identifies the same tuple everywhere in the package.  All-binary designs
never touch floating point: every monomial value is +-1 computed from the
parity of an integer dot product.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DesignMismatchError

__all__ = ["DesignSpace", "parse_design", "exponent_weight"]

# exact values of exp(2*pi*i*r) for the quarter turns
_EXACT_PHASE = {
    Fraction(0): 1,
    Fraction(1, 2): -1,
    Fraction(1, 4): 1j,
    Fraction(3, 4): -1j,
}


def exponent_weight(alpha: tuple[int, ...]) -> int:
    """Number of nonzero entries |alpha|_0."""
    return sum(1 for a in alpha if a != 0)


@dataclass(frozen=True)
class DesignSpace:
    """The full factorial design D = D_1 x ... x D_m.

    Factor j has s_j >= 2 levels coded by the integers 0..s_j-1; level k
    stands for the s_j-th root of unity exp(2*pi*i*k/s_j).
    """

    levels: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(int(s) for s in self.levels)
        if not levels:
            raise ValueError("a design needs at least one factor")
        if any(s < 2 for s in levels):
            raise ValueError(f"every factor needs at least 2 levels, got {levels}")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_string(cls, spec: str) -> "DesignSpace":
        return parse_design(spec)

    @property
    def m(self) -> int:
        """Number of factors."""
        return len(self.levels)

    @property
    def card(self) -> int:
        """#D, the number of points of the full design."""
        return math.prod(self.levels)

    @property
    def is_binary(self) -> bool:
        return all(s == 2 for s in self.levels)

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.levels)

    # ------------------------------------------------------------ indexing

    def index_of(self, coords: tuple[int, ...]) -> int:
        """Lexicographic index of a point (or exponent tuple)."""
        self._check_coords(coords)
        idx = 0
        for k, s in zip(coords, self.levels):
            idx = idx * s + k
        return idx

    def point_at(self, index: int) -> tuple[int, ...]:
        """Inverse of index_of."""
        if not 0 <= index < self.card:
            raise IndexError(f"point index {index} out of range for #D={self.card}")
        out = []
        for s in reversed(self.levels):
            out.append(index % s)
            index //= s
        return tuple(reversed(out))

    def points(self) -> list[tuple[int, ...]]:
        """All #D points in lexicographic order (factor 1 slowest)."""
        return [tuple(row) for row in self.point_array]

    def exponents(self) -> list[tuple[int, ...]]:
        """All exponent tuples alpha of L, in the same order as points()."""
        return self.points()

    @cached_property
    def point_array(self) -> np.ndarray:
        """(#D, m) integer array of points in lexicographic order."""
        cols = []
        reps_after = self.card
        reps_before = 1
        for s in self.levels:
            reps_after //= s
            block = np.repeat(np.arange(s), reps_after)
            cols.append(np.tile(block, reps_before))
            reps_before *= s
        arr = np.column_stack(cols).astype(np.int64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def exponent_weights(self) -> np.ndarray:
        """|alpha|_0 for every exponent index."""
        w = (self.point_array != 0).sum(axis=1)
        w.flags.writeable = False
        return w

    @cached_property
    def negation_index(self) -> np.ndarray:
        """Index map alpha -> [-alpha] (componentwise negation mod s_j)."""
        neg = (-self.point_array) % np.array(self.levels)
        idx = np.array([self.index_of(tuple(row)) for row in neg], dtype=np.int64)
        idx.flags.writeable = False
        return idx

    # ------------------------------------------------------------ monomials

    def monomial_value(self, point: tuple[int, ...], alpha: tuple[int, ...]):
        """X^alpha evaluated at a point: prod_j exp(2*pi*i*k_j*alpha_j/s_j).

        Returns an exact integer +-1 for all-binary designs and exact
        values for any phase that is a multiple of a quarter turn.
        """
        self._check_coords(point)
        self._check_coords(alpha)
        if self.is_binary:
            parity = sum(k * a for k, a in zip(point, alpha)) % 2
            return -1 if parity else 1
        phase = sum(
            (Fraction(k * a, s) for k, a, s in zip(point, alpha, self.levels)),
            Fraction(0),
        ) % 1
        exact = _EXACT_PHASE.get(phase)
        if exact is not None:
            return exact
        return cmath.exp(2j * cmath.pi * float(phase))

    @cached_property
    def character_matrix(self) -> np.ndarray:
        """X[i, a] = X^alpha_a(zeta_i) over all point/exponent indices.

        int8 matrix of +-1 for binary designs, complex128 otherwise.
        The matrix is symmetric in i and a.
        """
        pts = self.point_array
        if self.is_binary:
            par = (pts @ pts.T) % 2
            mat = np.where(par, -1, 1).astype(np.int8)
        else:
            phase = np.zeros((self.card, self.card))
            for j, s in enumerate(self.levels):
                phase += np.multiply.outer(pts[:, j], pts[:, j]) / s
            mat = np.exp(2j * np.pi * phase)
        mat.flags.writeable = False
        return mat

    # ------------------------------------------------------------ checks

    def _check_coords(self, coords: tuple[int, ...]) -> None:
        if len(coords) != self.m:
            raise DesignMismatchError(
                f"tuple {coords} has {len(coords)} entries, design has m={self.m}"
            )
        for k, s in zip(coords, self.levels):
            if not 0 <= k < s:
                raise DesignMismatchError(f"entry {k} out of range for {s} levels")

    def check_same(self, other: "DesignSpace") -> None:
        if self.levels != other.levels:
            raise DesignMismatchError(f"designs differ: {self} vs {other}")


def parse_design(spec: str) -> DesignSpace:
    """Parse a design specification string such as "2 2 2 2 2"."""
    parts = spec.replace(",", " ").split()
    if not parts:
        raise ValueError("empty design specification")
    try:
        levels = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"malformed design specification {spec!r}") from exc
    return DesignSpace(levels)

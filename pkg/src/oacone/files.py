"""Plain-text file formats for fractions.

counting vector: one integer per line, #D lines, lexicographic point order.
run list:        one point per line, m space-separated level indices,
                 repeated points allowed.
"""

from __future__ import annotations

import numpy as np

from .counting import CountingVector
from .design import DesignSpace
from .errors import FileFormatError

__all__ = [
    "read_counting_vector",
    "read_run_list",
    "load_fraction",
    "write_counting_vector",
    "write_run_list",
]


def _read_lines(path) -> list[list[str]]:
    try:
        with open(path, encoding="ascii") as fh:
            return [line.split() for line in fh if line.strip()]
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from exc


def read_counting_vector(path, design: DesignSpace) -> CountingVector:
    rows = _read_lines(path)
    if len(rows) != design.card:
        raise FileFormatError(
            f"{path}: {len(rows)} lines, a counting vector needs #D={design.card}"
        )
    values = []
    for i, row in enumerate(rows):
        if len(row) != 1:
            raise FileFormatError(f"{path}: line {i + 1} has {len(row)} fields, wanted 1")
        try:
            values.append(int(row[0]))
        except ValueError as exc:
            raise FileFormatError(f"{path}: line {i + 1} is not an integer") from exc
    if any(v < 0 for v in values):
        raise FileFormatError(f"{path}: negative multiplicity")
    return CountingVector(design, np.array(values, dtype=np.int64))


def read_run_list(path, design: DesignSpace) -> CountingVector:
    rows = _read_lines(path)
    points = []
    for i, row in enumerate(rows):
        if len(row) != design.m:
            raise FileFormatError(
                f"{path}: line {i + 1} has {len(row)} fields, a point needs m={design.m}"
            )
        try:
            point = tuple(int(v) for v in row)
        except ValueError as exc:
            raise FileFormatError(f"{path}: line {i + 1} is not integer-valued") from exc
        for value, s in zip(point, design.levels):
            if not 0 <= value < s:
                raise FileFormatError(
                    f"{path}: line {i + 1} has level {value}, factor allows 0..{s - 1}"
                )
        points.append(point)
    return CountingVector.from_points(design, points)


def load_fraction(path, design: DesignSpace, fmt: str = "auto") -> CountingVector:
    """Read either format; "auto" decides from the line shape."""
    if fmt not in ("auto", "counts", "runs"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "counts":
        return read_counting_vector(path, design)
    if fmt == "runs":
        return read_run_list(path, design)
    rows = _read_lines(path)
    if design.m == 1:
        # both formats are single-column; counting vector iff exactly #D lines
        if len(rows) == design.card:
            return read_counting_vector(path, design)
        return read_run_list(path, design)
    if rows and len(rows[0]) == design.m:
        return read_run_list(path, design)
    return read_counting_vector(path, design)


def write_counting_vector(y: CountingVector, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for value in y.y:
            fh.write(f"{int(value)}\n")


def write_run_list(y: CountingVector, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for index, count in enumerate(y.y):
            point = y.design.point_at(index)
            line = " ".join(str(k) for k in point)
            for _ in range(int(count)):
                fh.write(line + "\n")

"""Enumeration and GMA classification of all OAs of a given run size.

Every OA of size n is an N-combination of Hilbert-basis elements, so the
candidates are exactly the multisets of basis elements whose sizes sum to n.
Candidates are deduplicated on the exact counting vector; each distinct
vector keeps every provenance label ("16-run", "(8+8)-run", ...) that
produced it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .aberration import Gwlp, GmaOrder, gma_compare, gwlp
from .counting import CountingVector
from .design import DesignSpace
from .hilbert import HilbertBasis
from .union import FractionSummary, summarize, union_gwlp

__all__ = ["OaCatalog", "CatalogEntry", "ClassificationReport", "enumerate_size",
           "classify", "gma_best"]


@dataclass
class CatalogEntry:
    vector: np.ndarray
    labels: set[str]
    gwlp: Gwlp


@dataclass
class OaCatalog:
    design: DesignSpace
    strength: int
    n: int
    entries: dict[bytes, CatalogEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def counting_vectors(self) -> list[CountingVector]:
        return [CountingVector(self.design, e.vector) for e in self.entries.values()]

    def gwlp_index(self) -> dict[Gwlp, int]:
        out: dict[Gwlp, int] = {}
        for entry in self.entries.values():
            out[entry.gwlp] = out.get(entry.gwlp, 0) + 1
        return out

    def label_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for entry in self.entries.values():
            for label in entry.labels:
                out[label] = out.get(label, 0) + 1
        return out


@dataclass
class ClassificationReport:
    design: DesignSpace
    strength: int
    n: int
    value_order: list[Fraction]
    table: dict[tuple[str, Fraction], int]
    label_totals: dict[str, int]
    optima: list[tuple[Gwlp, int]]

    def labels(self) -> list[str]:
        return sorted(self.label_totals)


def _composition_label(sizes: tuple[int, ...]) -> str:
    if len(sizes) == 1:
        return f"{sizes[0]}-run"
    return "(" + "+".join(str(s) for s in sizes) + ")-run"


def _size_multisets(available: list[int], n: int) -> list[tuple[int, ...]]:
    """All non-increasing-free multisets of available sizes summing to n."""
    available = sorted(set(available))
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], start: int, left: int) -> None:
        if left == 0:
            out.append(tuple(prefix))
            return
        for i in range(start, len(available)):
            s = available[i]
            if s > left:
                break
            prefix.append(s)
            rec(prefix, i, left - s)
            prefix.pop()

    rec([], 0, n)
    return out


def enumerate_size(
    basis: HilbertBasis,
    n: int,
    verify_fraction: float = 0.0,
    workers: int = 1,
    seed: int = 0,
) -> OaCatalog:
    """All OAs of run size n as unions of basis elements, deduplicated.

    GWLPs of unions come from the parts' cached coefficient tables via the
    union formula; verify_fraction > 0 recomputes that share of them from
    the summed counting vectors as a standing cross-check.
    """
    design = basis.design
    catalog = OaCatalog(design, basis.strength, n)
    sizes = basis.sizes
    by_size: dict[int, list[int]] = {}
    for idx, s in enumerate(sizes):
        by_size.setdefault(int(s), []).append(idx)
    summaries: dict[int, FractionSummary] = {}

    def summary(idx: int) -> FractionSummary:
        if idx not in summaries:
            summaries[idx] = summarize(CountingVector(design, basis.elements[idx]))
        return summaries[idx]

    candidates: list[tuple[str, tuple[int, ...]]] = []
    for multiset in _size_multisets(sorted(by_size), n):
        label = _composition_label(multiset)
        groups: list[list[tuple[int, ...]]] = []
        for s in sorted(set(multiset)):
            k = multiset.count(s)
            groups.append([c for c in combinations_with_replacement(by_size[s], k)])
        def expand(gi: int, chosen: tuple[int, ...]) -> None:
            if gi == len(groups):
                candidates.append((label, chosen))
                return
            for combo in groups[gi]:
                expand(gi + 1, chosen + combo)
        expand(0, ())

    def evaluate(item: tuple[str, tuple[int, ...]]):
        label, indices = item
        vector = basis.elements[list(indices)].sum(axis=0)
        if len(indices) == 1:
            pattern = summary(indices[0]).gwlp
        else:
            pattern = union_gwlp([summary(i) for i in indices])
        return label, indices, vector, pattern

    # summaries are built up front so threaded evaluation never mutates shared state
    for _, indices in candidates:
        for i in indices:
            summary(i)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evaluated = list(pool.map(evaluate, candidates))
    else:
        evaluated = [evaluate(c) for c in candidates]

    rng = random.Random(seed)
    for label, indices, vector, pattern in evaluated:
        if verify_fraction > 0 and rng.random() < verify_fraction:
            direct = gwlp(CountingVector(design, vector))
            if tuple(direct.a) != tuple(pattern.a):
                raise AssertionError(
                    f"union formula disagrees with direct GWLP for {indices}"
                )
        key = vector.astype(np.int64).tobytes()
        entry = catalog.entries.get(key)
        if entry is None:
            catalog.entries[key] = CatalogEntry(vector, {label}, pattern)
        else:
            entry.labels.add(label)
    return catalog


def classify(catalog: OaCatalog) -> ClassificationReport:
    """Cross-tabulate provenance type against the exact A_{t+1} value."""
    if not len(catalog):
        raise ValueError("cannot classify an empty catalog")
    t1 = catalog.strength + 1
    table: dict[tuple[str, Fraction], int] = {}
    label_totals: dict[str, int] = {}
    values = set()
    for entry in catalog.entries.values():
        value = entry.gwlp[t1]
        values.add(value)
        for label in entry.labels:
            table[(label, value)] = table.get((label, value), 0) + 1
            label_totals[label] = label_totals.get(label, 0) + 1
    best = gma_best(catalog)
    optima: list[tuple[Gwlp, int]] = []
    if best:
        pattern = best[0][1]
        optima.append((pattern, len(best)))
    return ClassificationReport(
        catalog.design, catalog.strength, catalog.n,
        sorted(values), table, label_totals, optima,
    )


def gma_best(catalog: OaCatalog) -> list[tuple[bytes, Gwlp]]:
    """Every entry whose GWLP is GMA-minimal; ties are all returned."""
    best: Gwlp | None = None
    for entry in catalog.entries.values():
        if best is None or gma_compare(entry.gwlp, best) is GmaOrder.BETTER:
            best = entry.gwlp
    if best is None:
        return []
    return [
        (key, entry.gwlp)
        for key, entry in catalog.entries.items()
        if gma_compare(entry.gwlp, best) is GmaOrder.EQUAL
    ]

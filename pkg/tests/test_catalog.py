from fractions import Fraction

import numpy as np
import pytest

from oacone import (
    CountingVector,
    DesignSpace,
    classify,
    constraint_matrix,
    enumerate_size,
    gma_best,
    hilbert_basis,
    is_member,
)

D3 = DesignSpace((2, 2, 2))


@pytest.fixture(scope="module")
def basis_d3():
    return hilbert_basis(constraint_matrix(D3, 2))


def test_enumerate_size_8(basis_d3):
    catalog = enumerate_size(basis_d3, 8)
    # multisets over the two size-4 elements: 2B1, B1+B2, 2B2
    assert len(catalog) == 3
    assert all(entry.labels == {"(4+4)-run"} for entry in catalog.entries.values())
    vectors = {tuple(e.vector) for e in catalog.entries.values()}
    b1, b2 = basis_d3.elements
    assert tuple(2 * b1) in vectors
    assert tuple(2 * b2) in vectors
    assert tuple(b1 + b2) in vectors


def test_enumerate_size_4(basis_d3):
    catalog = enumerate_size(basis_d3, 4)
    assert len(catalog) == 2
    assert all(entry.labels == {"4-run"} for entry in catalog.entries.values())


def test_enumerate_not_representable(basis_d3):
    catalog = enumerate_size(basis_d3, 6)
    assert len(catalog) == 0
    with pytest.raises(ValueError):
        classify(catalog)


def test_entries_are_members(basis_d3):
    matrix = constraint_matrix(D3, 2)
    for n in (4, 8, 12):
        for entry in enumerate_size(basis_d3, n).entries.values():
            assert is_member(CountingVector(D3, entry.vector), matrix)
            assert entry.vector.sum() == n


def test_gma_best_prefers_full_factorial(basis_d3):
    catalog = enumerate_size(basis_d3, 8)
    best = gma_best(catalog)
    assert len(best) == 1
    key, pattern = best[0]
    assert pattern.a == (1, 0, 0, 0)
    full = CountingVector.full_factorial(D3)
    assert np.frombuffer(key, dtype=np.int64).tolist() == full.y.tolist()


def test_gma_best_singleton(basis_d3):
    catalog = enumerate_size(basis_d3, 4)
    # both 4-run entries share GWLP (1,0,0,1): ties all returned
    best = gma_best(catalog)
    assert len(best) == 2


def test_classify_report(basis_d3):
    report = classify(enumerate_size(basis_d3, 8))
    assert report.label_totals == {"(4+4)-run": 3}
    assert report.table[("(4+4)-run", Fraction(0))] == 1
    assert report.table[("(4+4)-run", Fraction(1))] == 2
    assert report.optima == [(report.optima[0][0], 1)]
    assert report.optima[0][0].a == (1, 0, 0, 0)
    assert sum(report.table.values()) == sum(report.label_totals.values())


def test_verification_mode(basis_d3):
    catalog = enumerate_size(basis_d3, 8, verify_fraction=1.0)
    assert len(catalog) == 3


def test_workers_deterministic(basis_d3):
    serial = enumerate_size(basis_d3, 8, workers=1)
    threaded = enumerate_size(basis_d3, 8, workers=4)
    assert list(serial.entries.keys()) == list(threaded.entries.keys())
    for a, b in zip(serial.entries.values(), threaded.entries.values()):
        assert a.gwlp.a == b.gwlp.a and a.labels == b.labels


def test_gwlp_index(basis_d3):
    index = enumerate_size(basis_d3, 8).gwlp_index()
    by_value = {tuple(k.a): v for k, v in index.items()}
    assert by_value == {(1, 0, 0, 0): 1, (1, 0, 0, 1): 2}


@pytest.mark.parametrize("n,labels", [
    (16, {"(8+8)-run"}),
    (20, {"(8+12)-run"}),
    (24, {"(8+8+8)-run", "(12+12)-run"}),
])
def test_enumeration_equals_bruteforce_members_2p4(n, labels):
    """Every OA of size n is some union of basis elements: the catalog must
    reproduce the brute-force member set of the 2^4 cone exactly."""
    import _oracles

    d4 = DesignSpace((2, 2, 2, 2))
    basis = hilbert_basis(constraint_matrix(d4, 2))
    catalog = enumerate_size(basis, n)
    expected = {tuple(v) for v in _oracles.members_2x2x2x2(2, n)}
    got = {tuple(e.vector) for e in catalog.entries.values()}
    assert got == expected
    seen_labels = set()
    for entry in catalog.entries.values():
        seen_labels |= entry.labels
    assert seen_labels == labels

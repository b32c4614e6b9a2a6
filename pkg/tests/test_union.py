from fractions import Fraction

import numpy as np
import pytest

from oacone import (
    CountingVector,
    DesignSpace,
    coefficients_from_counts,
    cross_covariance,
    gwlp,
    replicate,
    strength,
    summarize,
    union_counts,
    union_gwlp,
)
from oacone.errors import DesignMismatchError

D3 = DesignSpace((2, 2, 2))


def parity_fraction(parity):
    runs = [p for p in D3.points() if sum(p) % 2 == parity]
    return CountingVector.from_points(D3, runs)


def test_union_of_half_fractions_is_full_factorial():
    union = union_counts([parity_fraction(1), parity_fraction(0)])
    assert union == CountingVector.full_factorial(D3)


def test_union_with_itself_doubles():
    y = parity_fraction(1)
    assert union_counts([y, y]) == replicate(y, 2)


def test_union_design_mismatch():
    with pytest.raises(DesignMismatchError):
        union_counts([parity_fraction(1),
                      CountingVector.full_factorial(DesignSpace((2, 2)))])


def test_worked_example_cross_term():
    """The two regular 2^3 half fractions: each has GWLP (1,0,0,1), the
    union kills A_3 through the weight-3 covariance c^(1) c^(2) = -1/4."""
    odd = summarize(parity_fraction(1))
    even = summarize(parity_fraction(0))
    assert odd.gwlp.a == (1, 0, 0, 1)
    assert even.gwlp.a == (1, 0, 0, 1)
    assert cross_covariance(odd, even, 3) == Fraction(-1, 4)
    combined = union_gwlp([odd, even])
    assert combined.a == (1, 0, 0, 0)


def test_union_gwlp_matches_direct_path():
    rng = np.random.default_rng(37)
    for _ in range(25):
        a = CountingVector(D3, rng.integers(0, 3, 8))
        b = CountingVector(D3, rng.integers(0, 3, 8))
        if a.n == 0 or b.n == 0:
            continue
        formula = union_gwlp([summarize(a), summarize(b)])
        direct = gwlp(union_counts([a, b]))
        assert formula.a == direct.a


def test_union_gwlp_three_parts():
    rng = np.random.default_rng(41)
    parts = [CountingVector(D3, rng.integers(1, 3, 8)) for _ in range(3)]
    formula = union_gwlp([summarize(p) for p in parts])
    direct = gwlp(union_counts(parts))
    assert formula.a == direct.a


def test_union_gwlp_symmetry():
    a, b = parity_fraction(1), CountingVector.full_factorial(D3)
    sa, sb = summarize(a), summarize(b)
    assert union_gwlp([sa, sb]).a == union_gwlp([sb, sa]).a


def test_union_gwlp_needs_two_parts():
    with pytest.raises(ValueError):
        union_gwlp([summarize(parity_fraction(1))])


def test_replicate_identity_and_invariance():
    y = parity_fraction(1)
    assert replicate(y, 1) == y
    assert gwlp(replicate(y, 2)).a == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        replicate(y, 0)


def test_replicate_full_factorial_keeps_strength():
    design = DesignSpace((2, 2))
    y = replicate(CountingVector.full_factorial(design), 3)
    assert strength(y) == 2


def test_coefficient_additivity():
    rng = np.random.default_rng(43)
    a = CountingVector(D3, rng.integers(0, 3, 8))
    b = CountingVector(D3, rng.integers(0, 3, 8))
    ca = coefficients_from_counts(a).scaled
    cb = coefficients_from_counts(b).scaled
    cu = coefficients_from_counts(union_counts([a, b])).scaled
    assert (cu == ca + cb).all()


def test_union_strength_at_least_min():
    rng = np.random.default_rng(47)
    for _ in range(20):
        a = CountingVector(D3, rng.integers(0, 2, 8))
        b = CountingVector(D3, rng.integers(0, 2, 8))
        if a.n == 0 or b.n == 0:
            continue
        union = union_counts([a, b])
        assert strength(union) >= min(strength(a), strength(b))


def test_union_gwlp_mixed_levels():
    design = DesignSpace((2, 3))
    rng = np.random.default_rng(53)
    a = CountingVector(design, rng.integers(1, 3, 6))
    b = CountingVector(design, rng.integers(1, 3, 6))
    formula = union_gwlp([summarize(a), summarize(b)])
    direct = gwlp(union_counts([a, b]))
    assert np.allclose([float(v) for v in formula.a],
                       [float(v) for v in direct.a], atol=1e-9)

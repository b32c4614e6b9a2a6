"""Brute-force oracles, independent of the library's search and DFT paths.

Everything here works from first principles on marginal counts: a cone
member of size n is a nonnegative integer vector whose every t-factor
marginal is constant (n divided by the marginal's cell count).
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def members_dfs(levels, t, n):
    """All counting vectors of OA(n, levels, t) by cellwise backtracking.

    Suitable for small spaces (#D <= 8 or so).
    """
    m = len(levels)
    card = math.prod(levels)
    points = list(itertools.product(*(range(s) for s in levels)))
    subsets = list(itertools.combinations(range(m), t))
    classes = []   # one entry per (subset, cell): list of point indices
    targets = []
    for subset in subsets:
        cell_count = math.prod(levels[j] for j in subset)
        if n % cell_count:
            return []
        lam = n // cell_count
        cells = {}
        for idx, p in enumerate(points):
            cells.setdefault(tuple(p[j] for j in subset), []).append(idx)
        for members in cells.values():
            classes.append(members)
            targets.append(lam)
    point_classes = [[] for _ in range(card)]
    for ci, members in enumerate(classes):
        for idx in members:
            point_classes[idx].append(ci)
    # last point index of each class, for completion checks
    class_last = [max(members) for members in classes]

    out = []
    y = [0] * card
    sums = [0] * len(classes)

    def rec(idx):
        if idx == card:
            out.append(tuple(y))
            return
        ub = min(targets[ci] - sums[ci] for ci in point_classes[idx])
        for v in range(ub, -1, -1):
            y[idx] = v
            ok = True
            for ci in point_classes[idx]:
                sums[ci] += v
                if class_last[ci] == idx and sums[ci] != targets[ci]:
                    ok = False
            if ok:
                rec(idx + 1)
            for ci in point_classes[idx]:
                sums[ci] -= v
        y[idx] = 0

    rec(0)
    return out


def members_2x2x2x2(t, n):
    """All counting vectors of OA(n, 2^4, t) via a split on the first factor.

    For t = 2: y = (u, v) works iff u and v both have all three single-factor
    marginals equal to n/4 and their pair-marginal profiles are complementary
    (summing to n/4 cellwise).  For t = 3: u must be a strength-2 member of
    the 2^3 cone of size n/2 and v = n/8 - u cellwise.
    """
    if n <= 0:
        return []
    if t == 3:
        if n % 8:
            return []
        lam = n // 8
        out = []
        for u in members_dfs((2, 2, 2), 2, n // 2):
            if max(u) <= lam:
                v = tuple(lam - x for x in u)
                out.append(u + v)
        return out
    if t != 2:
        raise ValueError("only t in {2, 3} supported")
    if n % 4:
        return []
    lam = n // 4
    halves = _strength1_halves(lam)
    by_profile = {}
    for u in halves:
        by_profile.setdefault(_pair_profile(u), []).append(u)
    out = []
    target = tuple([lam] * 12)
    for profile, us in by_profile.items():
        complement = tuple(t_ - p for t_, p in zip(target, profile))
        vs = by_profile.get(complement)
        if not vs:
            continue
        for u in us:
            for v in vs:
                out.append(u + v)
    return out


def _strength1_halves(lam):
    """Vectors on 2^3 whose three single-factor marginals are all (lam, lam)."""
    out = []
    points = list(itertools.product((0, 1), repeat=3))
    y = [0] * 8
    margins = [[0, 0], [0, 0], [0, 0]]

    def rec(idx):
        if idx == 8:
            if all(margins[j][0] == lam and margins[j][1] == lam for j in range(3)):
                out.append(tuple(y))
            return
        p = points[idx]
        ub = min(lam - margins[j][p[j]] for j in range(3))
        for v in range(ub + 1):
            y[idx] = v
            for j in range(3):
                margins[j][p[j]] += v
            rec(idx + 1)
            for j in range(3):
                margins[j][p[j]] -= v
        y[idx] = 0

    rec(0)
    return out


def _pair_profile(u):
    """Pair-marginal counts of a 2^3 vector, for pairs (0,1), (0,2), (1,2)."""
    points = list(itertools.product((0, 1), repeat=3))
    profile = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        cells = {(i, j): 0 for i in (0, 1) for j in (0, 1)}
        for p, v in zip(points, u):
            cells[(p[a], p[b])] += v
        profile.extend(cells[k] for k in sorted(cells))
    return tuple(profile)


def minimal_members(members_by_size):
    """Inclusion-minimal vectors given {size: list of vectors}."""
    minimal = []
    smaller = []
    for size in sorted(members_by_size):
        for y in members_by_size[size]:
            arr = np.array(y)
            if not any((np.array(b) <= arr).all() for b in smaller):
                minimal.append(y)
        smaller.extend(members_by_size[size])
    return minimal

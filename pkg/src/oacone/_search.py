"""Search engines for Hilbert-basis computation.

Two complete strategies, both completion procedures over the nonnegative
orthant with the classic pruning rules: a step is taken only when it lowers
the residual norm (scalar-product test against the remaining constraints),
and anything that coordinatewise dominates an already-found minimal solution
is discarded.

* unit-step: breadth-first on single-coordinate increments.  Works for any
  integer equality system; practical for small design spaces only.

* fiber lift (binary designs): the basis for m factors grows from the basis
  for m-1 factors.  The distributions of an (m-1)-factor basis element over
  the two fibers of the new factor form the Hilbert basis of the relaxed
  cone {y : projection is a member}, so the completion walks in
  generator-sized steps against the few remaining balance constraints
  instead of unit steps.  The frontier is stored as one canonical
  representative per orbit of the symmetry group fixing the fiber structure
  (permutations of the old factors composed with every level translation);
  residuals are recomputed after canonicalization because the group only
  permutes them up to sign.

The lift's hot path gates children without forming them: a child w + g is
dominated by a solution z exactly when (z - w)^+ <= g, so each frontier
vector precomputes its small list of difference vectors, bucketed by the
source element of g (whose support confines where g can live).  Queued
survivors carry the solution-count watermark they were gated against, and
are re-checked only against newer solutions when popped.
"""

from __future__ import annotations

import itertools
import os
import time

import numpy as np
from numba import njit

from .errors import BudgetExceededError

DEFAULT_BUDGET = 50_000_000  # total queued vectors across all pending norms


# ------------------------------------------------------------------ kernels

@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _support_masks(vecs):
    nrows, d = vecs.shape
    out = np.zeros(nrows, dtype=np.uint64)
    for k in range(nrows):
        m = np.uint64(0)
        for i in range(d):
            if vecs[k, i]:
                m |= np.uint64(1) << np.uint64(i)
        out[k] = m
    return out


@njit(cache=True)
def _canon_batch(children, maps, out):
    """Per row: lexicographic minimum of {y[maps[l] ^ v] : all l, v}.

    maps[l][0] = 0 and maps[l][1] = 1 for every group element (the linear
    part fixes the last factor's bit), so position 0 forces y[v] to be the
    global minimum and position 1 prunes v before any map is tried.
    """
    nrows, d = children.shape
    nmaps = maps.shape[0]
    for k in range(nrows):
        y = children[k]
        mu = y[0]
        for i in range(1, d):
            if y[i] < mu:
                mu = y[i]
        mu2 = 255
        for v in range(d):
            if y[v] == mu and y[v ^ 1] < mu2:
                mu2 = y[v ^ 1]
        best = out[k]
        first = True
        for v in range(d):
            if y[v] != mu or y[v ^ 1] != mu2:
                continue
            for l in range(nmaps):
                mp = maps[l]
                if first:
                    for p in range(d):
                        best[p] = y[mp[p] ^ v]
                    first = False
                    continue
                better = False
                for p in range(2, d):
                    c = y[mp[p] ^ v]
                    if c > best[p]:
                        break
                    if c < best[p]:
                        better = True
                        break
                if better:
                    for p in range(d):
                        best[p] = y[mp[p] ^ v]


@njit(cache=True)
def _dominated_masked(vecs, vmasks, found, fmasks, out):
    """out[k] = True iff some found row <= vecs[k] (support-mask prefilter)."""
    nrows, d = vecs.shape
    nfound = found.shape[0]
    for k in range(nrows):
        y = vecs[k]
        ym = ~vmasks[k]
        hit = False
        for s in range(nfound):
            if fmasks[s] & ym:
                continue
            b = found[s]
            ok = True
            for i in range(d):
                if b[i] > y[i]:
                    ok = False
                    break
            if ok:
                hit = True
                break
        out[k] = hit


@njit(cache=True)
def _expand_level(
    reps, res, norms,
    gens, gen_masks, gen_source,
    group_res, group_start, group_len,
    found, found_planes, found_sizes,
    source_masks, source_norms,
    delta_scratch, delta_masks, delta_norms, bucket_idx, bucket_start, bucket_len,
    out, out_written,
):
    """Expand every frontier rep; emit gate-surviving children into out.

    For each rep w the relevant dominators are converted to difference form
    delta = (found - w)^+ (child w + g is dominated iff delta <= g for some
    relevant delta), bucketed per generator source element.  The norm of the
    difference is taken from thermometer bit-planes: |(z - w)^+| is the sum
    over value thresholds k of popcount(plane_k(z) & ~plane_k(w)).  out must
    have room for one child per steered (rep, generator) pair.
    """
    nreps, d = reps.shape
    ngroups = group_res.shape[0]
    nr = res.shape[1]
    nfound = found.shape[0]
    nplanes = found_planes.shape[1]
    nsources = source_masks.shape[0]
    max_step = 0
    for b in range(nsources):
        if source_norms[b] > max_step:
            max_step = source_norms[b]
    wplanes = np.empty(nplanes, dtype=np.uint64)
    pos = 0
    for k in range(nreps):
        w = reps[k]
        wnorm = norms[k]
        for p in range(nplanes):
            mask = np.uint64(0)
            for i in range(d):
                if w[i] > p:
                    mask |= np.uint64(1) << np.uint64(i)
            wplanes[p] = mask
        # difference-form dominator list
        ndelta = 0
        for s in range(nfound):
            if found_sizes[s] > wnorm + max_step:
                break
            total = _popcount(found_planes[s, 0] & ~wplanes[0])
            if total > np.uint64(max_step):
                continue
            for p in range(1, nplanes):
                total += _popcount(found_planes[s, p] & ~wplanes[p])
            if total > np.uint64(max_step):
                continue
            z = found[s]
            dmask = np.uint64(0)
            for i in range(d):
                diff = np.int64(z[i]) - np.int64(w[i])
                if diff > 0:
                    delta_scratch[ndelta, i] = diff
                    dmask |= np.uint64(1) << np.uint64(i)
                else:
                    delta_scratch[ndelta, i] = 0
            delta_masks[ndelta] = dmask
            delta_norms[ndelta] = np.int64(total)
            ndelta += 1
        # bucket deltas by compatible source element, smallest norms first so
        # the per-child scan meets the likeliest dominators early
        order = np.argsort(delta_norms[:ndelta], kind="quicksort")
        bpos = 0
        for b in range(nsources):
            bucket_start[b] = bpos
            count = 0
            for oi in range(ndelta):
                t = order[oi]
                if delta_norms[t] <= source_norms[b] and not (
                    delta_masks[t] & ~source_masks[b]
                ):
                    bucket_idx[bpos] = t
                    bpos += 1
                    count += 1
            bucket_len[b] = count
        # steered extension with per-bucket gate
        for grp in range(ngroups):
            dot = 0
            for r in range(nr):
                dot += res[k, r] * group_res[grp, r]
            if dot >= 0:
                continue
            start = group_start[grp]
            for gi in range(start, start + group_len[grp]):
                b = gen_source[gi]
                blen = bucket_len[b]
                gm = gen_masks[gi]
                g = gens[gi]
                dominated = False
                bs = bucket_start[b]
                for u in range(blen):
                    t = bucket_idx[bs + u]
                    if delta_masks[t] & ~gm:
                        continue
                    ok = True
                    for i in range(d):
                        if delta_scratch[t, i] > g[i]:
                            ok = False
                            break
                    if ok:
                        dominated = True
                        break
                if not dominated:
                    row = out[pos]
                    for i in range(d):
                        row[i] = w[i] + g[i]
                    pos += 1
    out_written[0] = pos


def _value_planes(vecs: np.ndarray) -> np.ndarray:
    """Thermometer bit-planes: planes[s, p] has bit i set iff vecs[s, i] > p."""
    nplanes = int(vecs.max()) if vecs.size else 1
    weights = np.uint64(1) << np.arange(vecs.shape[1], dtype=np.uint64)
    out = np.zeros((len(vecs), nplanes), dtype=np.uint64)
    for p in range(nplanes):
        out[:, p] = ((vecs > p) * weights).sum(axis=1)
    return out


def _dedup_rows(arr: np.ndarray) -> np.ndarray:
    if len(arr) <= 1:
        return arr
    keys = np.ascontiguousarray(arr).view(np.dtype((np.void, arr.shape[1])))[:, 0]
    _, index = np.unique(keys, return_index=True)
    return arr[np.sort(index)]


def _prune_dominated(vecs: np.ndarray, found: np.ndarray) -> np.ndarray:
    if not len(vecs) or not len(found):
        return vecs
    mask = np.zeros(len(vecs), dtype=np.bool_)
    _dominated_masked(vecs, _support_masks(vecs), found, _support_masks(found), mask)
    return vecs[~mask]


# ------------------------------------------------------------- unit-step CD

def minimal_solutions_unit(rows: np.ndarray, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All minimal nonzero solutions of rows @ y = 0, y >= 0 integer."""
    rows = np.asarray(rows, dtype=np.int64)
    d = rows.shape[1]
    identity = np.eye(d, dtype=np.uint8)
    step_res = np.ascontiguousarray(rows.T)  # residual change of each unit step
    frontier = identity
    found = np.zeros((0, d), dtype=np.uint8)
    while len(frontier):
        if len(frontier) > budget:
            raise BudgetExceededError(
                f"unit-step frontier reached {len(frontier)} vectors", len(frontier)
            )
        res = frontier.astype(np.int64) @ rows.T
        solution_mask = ~res.any(axis=1)
        sols = _prune_dominated(frontier[solution_mask], found)
        if len(sols):
            found = np.concatenate([found, sols]) if len(found) else sols
        frontier, res = frontier[~solution_mask], res[~solution_mask]
        if not len(frontier):
            break
        steered = res @ rows < 0
        if len(frontier) + int(steered.sum()) > budget:
            raise BudgetExceededError(
                f"unit-step expansion would reach {int(steered.sum())} children",
                len(frontier),
            )
        children = []
        for k in range(len(frontier)):
            steps = np.flatnonzero(steered[k])
            if len(steps):
                block = np.repeat(frontier[k][None, :], len(steps), axis=0)
                block[np.arange(len(steps)), steps] += 1
                children.append(block)
        if not children:
            break
        frontier = _dedup_rows(np.concatenate(children))
        frontier = _prune_dominated(frontier, found)
    return found


# ------------------------------------------------------- binary fiber lift

def _fiber_maps(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Index maps of the group fixing the fiber split: permutations of the
    first m-1 factors composed with every translation (the translation by
    the last factor's bit is the fiber swap).

    Returns (linear, full): the bare bit-permutation maps, which fix cells 0
    and 1 and are what _canon_batch needs (it applies translations itself),
    and the whole group for orbit expansion.
    """
    d = 1 << m
    linear = []
    for perm in itertools.permutations(range(m - 1)):
        row = np.zeros(d, dtype=np.int64)
        for cell in range(d):
            image = cell & 1
            for j in range(m - 1):
                if (cell >> (m - 1 - perm[j])) & 1:
                    image |= 1 << (m - 1 - j)
            row[cell] = image
        linear.append(row)
    maps = []
    for row in linear:
        for v in range(d):
            maps.append(row ^ v)
    return np.array(linear, dtype=np.int64), np.array(maps, dtype=np.int64)


def _lift_generators(small_basis: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """All fiber distributions of each (m-1)-factor basis element, with the
    index of the element each came from.

    Cell (c, k_m) of the lifted design is index 2c + k_m; a cell of
    multiplicity v splits v+1 ways, so element b yields prod(b_c + 1)
    generators, all supported on b's lifted cells.
    """
    d = 1 << m
    gens = []
    source = []
    for which, b in enumerate(small_basis):
        support = [(c, int(v)) for c, v in enumerate(b) if v]
        for choice in itertools.product(*(range(v + 1) for _, v in support)):
            y = np.zeros(d, dtype=np.uint8)
            for (c, v), upper in zip(support, choice):
                y[2 * c] = upper
                y[2 * c + 1] = v - upper
            gens.append(y)
            source.append(which)
    return np.array(gens, dtype=np.uint8), np.array(source, dtype=np.int64)


def _remaining_rows(m: int, t: int) -> np.ndarray:
    """Constraints not implied by projection membership.

    For each (t-1)-subset J of the old factors, all pairwise differences of
    the upper-fiber J-marginal cells, plus one fiber-balance row |u| - |v|.
    Pairwise differences (rather than a reference cell) keep the Gram matrix
    invariant under the fiber-fixing group, which orbit compression needs.
    """
    d = 1 << m
    upper = np.array([(c & 1) == 0 for c in range(d)])
    bits = np.array([[(c >> (m - 1 - j)) & 1 for j in range(m)] for c in range(d)])
    rows = []
    for subset in itertools.combinations(range(m - 1), t - 1):
        cells = list(itertools.product((0, 1), repeat=len(subset)))
        indicators = []
        for cell in cells:
            sel = upper.copy()
            for j, bit in zip(subset, cell):
                sel &= bits[:, j] == bit
            indicators.append(sel.astype(np.int64))
        for a in range(len(cells)):
            for b in range(a + 1, len(cells)):
                rows.append(indicators[a] - indicators[b])
    rows.append(np.where(upper, 1, -1).astype(np.int64))
    return np.array(rows, dtype=np.int64)


def binary_basis_recursive(
    m: int,
    t: int,
    budget: int = DEFAULT_BUDGET,
    progress=None,
) -> np.ndarray:
    """Hilbert basis of the strength-t cone of the 2^m design."""
    if not 1 <= t <= m:
        raise ValueError(f"strength {t} out of range for m={m}")
    if m == t:
        return np.ones((1, 1 << m), dtype=np.uint8)
    small = binary_basis_recursive(m - 1, t, budget=budget, progress=progress)
    return _lift_level(small, m, t, budget, progress)


class _NormQueue:
    """Pending vectors bucketed by norm, deduplicated in waves.

    Batches carry the solution-count watermark they were gated against.
    Whenever a norm's pending rows exceed the wave size they are merged and
    deduplicated (keeping each row's smallest watermark) to bound memory.
    """

    WAVE = 8_000_000

    def __init__(self):
        self._batches: dict[int, list[tuple[np.ndarray, int]]] = {}
        self._pending: dict[int, int] = {}
        self.total = 0

    def push(self, norm: int, batch: np.ndarray, watermark: int) -> None:
        self._batches.setdefault(norm, []).append((batch, watermark))
        self._pending[norm] = self._pending.get(norm, 0) + len(batch)
        self.total += len(batch)
        if self._pending[norm] > self.WAVE:
            self._consolidate(norm)

    def _consolidate(self, norm: int) -> None:
        # duplicates may carry different watermarks; any one of them is a
        # valid certificate (the vector was gated against found[:watermark]),
        # so plain dedup keeping the first occurrence's mark is sound
        batches = self._batches[norm]
        merged = np.concatenate([b for b, _ in batches])
        marks = np.concatenate([np.full(len(b), wm, dtype=np.int64) for b, wm in batches])
        keys = np.ascontiguousarray(merged).view(
            np.dtype((np.void, merged.shape[1]))
        )[:, 0]
        _, index = np.unique(keys, return_index=True)
        merged, marks = merged[index], marks[index]
        self.total -= self._pending[norm] - len(merged)
        self._pending[norm] = len(merged)
        self._batches[norm] = [
            (merged[marks == wm], int(wm)) for wm in np.unique(marks)
        ]

    def pop_smallest(self) -> tuple[int, list[tuple[np.ndarray, int]]]:
        norm = min(self._batches)
        batches = self._batches.pop(norm)
        self.total -= self._pending.pop(norm)
        return norm, batches

    def __bool__(self) -> bool:
        return bool(self._batches)


def _lift_level(small_basis, m, t, budget, progress, chunk: int = 128) -> np.ndarray:
    d = 1 << m
    gens, gen_source = _lift_generators(small_basis, m)
    rows = _remaining_rows(m, t)
    linear_maps, full_maps = _fiber_maps(m)
    gen_res = gens.astype(np.int64) @ rows.T

    # sort generators by residual signature so steering costs one dot per group
    sig_keys = np.ascontiguousarray(gen_res).view(
        np.dtype((np.void, gen_res.shape[1] * 8))
    )[:, 0]
    order = np.argsort(sig_keys, kind="stable")
    gens = np.ascontiguousarray(gens[order])
    gen_source = gen_source[order]
    gen_res = gen_res[order]
    sig_keys = sig_keys[order]
    starts = np.flatnonzero(np.concatenate([[True], sig_keys[1:] != sig_keys[:-1]]))
    group_start = starts.astype(np.int64)
    group_len = np.diff(np.concatenate([starts, [len(sig_keys)]])).astype(np.int64)
    group_res = np.ascontiguousarray(gen_res[starts])
    gen_masks = _support_masks(gens)

    # per source element: lifted support mask and generator norm
    nsources = len(small_basis)
    source_norms = small_basis.sum(axis=1).astype(np.int64)
    source_masks = np.zeros(nsources, dtype=np.uint64)
    for which, b in enumerate(small_basis):
        mask = np.uint64(0)
        for c, v in enumerate(b):
            if v:
                mask |= np.uint64(1) << np.uint64(2 * c)
                mask |= np.uint64(1) << np.uint64(2 * c + 1)
        source_masks[which] = mask

    balanced = ~gen_res.any(axis=1)
    found = gens[balanced]
    found = found[np.argsort(found.sum(axis=1), kind="stable")]

    seeds = gens[~balanced]
    canon = np.empty_like(seeds)
    _canon_batch(seeds, linear_maps, canon)
    reps = _dedup_rows(canon)
    norms = reps.sum(axis=1)

    # the queue holds translation-canonical rows (cheap to produce in-stream);
    # the full canonical form is taken once per pop
    identity_map = np.arange(d, dtype=np.int64)[None, :]
    queue = _NormQueue()
    for norm in np.unique(norms):
        queue.push(int(norm), reps[norms == norm], 0)

    # scratch for the expansion kernel
    delta_scratch = np.zeros((4096, d), dtype=np.int64)
    delta_masks = np.zeros(4096, dtype=np.uint64)
    delta_norms = np.zeros(4096, dtype=np.int64)
    bucket_idx = np.zeros(4096 * nsources, dtype=np.int64)
    bucket_start = np.zeros(nsources, dtype=np.int64)
    bucket_len = np.zeros(nsources, dtype=np.int64)
    out = np.empty((chunk * len(gens), d), dtype=np.uint8)
    written = np.zeros(1, dtype=np.int64)

    debug_timing = bool(os.environ.get("OACONE_LIFT_TIMING"))

    while queue:
        if queue.total > budget:
            raise BudgetExceededError(
                f"lift frontier reached {queue.total} queued vectors", queue.total
            )
        _t0 = time.time()
        norm, batches = queue.pop_smallest()
        pieces = []
        for batch, watermark in batches:
            newer = found[watermark:]
            pieces.append(_prune_dominated(batch, newer))
        vecs = _dedup_rows(np.concatenate(pieces))
        _t1 = time.time()
        if not len(vecs):
            continue
        canon = np.empty_like(vecs)
        _canon_batch(vecs, linear_maps, canon)
        vecs = _dedup_rows(canon)
        _t2 = time.time()
        res = vecs.astype(np.int64) @ rows.T
        solution_mask = ~res.any(axis=1)
        sols = vecs[solution_mask]
        if len(sols):
            orbit = np.concatenate(
                [s[full_maps.reshape(-1)].reshape(len(full_maps), d) for s in sols]
            )
            found = np.concatenate([found, _dedup_rows(orbit)])
        vecs, res = vecs[~solution_mask], res[~solution_mask]
        if progress is not None:
            progress(m, int(norm), len(vecs), len(found), queue.total)
        if not len(vecs):
            continue
        if len(found) > len(delta_scratch):
            cap = 1 << int(np.ceil(np.log2(len(found) + 1)))
            delta_scratch = np.zeros((cap, d), dtype=np.int64)
            delta_masks = np.zeros(cap, dtype=np.uint64)
            delta_norms = np.zeros(cap, dtype=np.int64)
            bucket_idx = np.zeros(cap * nsources, dtype=np.int64)
        found_planes = _value_planes(found)
        found_sizes = found.sum(axis=1).astype(np.int64)
        vec_norms = vecs.sum(axis=1).astype(np.int64)
        watermark = len(found)
        _expand = _canon = _queue_t = 0.0
        _nchild = 0
        for lo in range(0, len(vecs), chunk):
            _ta = time.time()
            piece = np.ascontiguousarray(vecs[lo:lo + chunk])
            piece_res = np.ascontiguousarray(res[lo:lo + chunk])
            piece_norms = vec_norms[lo:lo + chunk]
            _expand_level(
                piece, piece_res, piece_norms,
                gens, gen_masks, gen_source,
                group_res, group_start, group_len,
                found, found_planes, found_sizes,
                source_masks, source_norms,
                delta_scratch, delta_masks, delta_norms,
                bucket_idx, bucket_start, bucket_len,
                out, written,
            )
            _tb = time.time()
            _expand += _tb - _ta
            survivors = out[: written[0]]
            _nchild += len(survivors)
            if not len(survivors):
                continue
            canon = np.empty_like(survivors)
            _canon_batch(survivors, identity_map, canon)
            _tc = time.time()
            _canon += _tc - _tb
            child_norms = canon.sum(axis=1).astype(np.int64)
            for child_norm in np.unique(child_norms):
                queue.push(int(child_norm), canon[child_norms == child_norm],
                           watermark)
            _queue_t += time.time() - _tc
            if queue.total > budget:
                raise BudgetExceededError(
                    f"lift frontier reached {queue.total} queued vectors", queue.total
                )
        if debug_timing:
            print(f"  [norm {norm}] popprune={_t1-_t0:.1f}s popcanon={_t2-_t1:.1f}s "
                  f"expand={_expand:.1f}s streamcanon={_canon:.1f}s queue={_queue_t:.1f}s "
                  f"survivors={_nchild}", flush=True)
    return found

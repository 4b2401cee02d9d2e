"""Integer kernels behind the exhaustive oracle.

Weights arrive already scaled to integers (common denominator), so every
kernel is exact.  Two interchangeable implementations exist:

* numba ``@njit`` loops (default when numba imports), and
* vectorized numpy, which also handles ``object`` arrays of Python ints
  when scaled weights would overflow int64.

Set ``GRAPHFAIR_DISABLE_NUMBA=1`` to force the numpy path.  Both paths
return identical values and identical first-argmax witnesses.

Bundle subsets are bitmasks over vertices.  Complete allocations are
indexed by ``a`` in ``[0, n**V)`` where vertex 0 is the most significant
base-``n`` digit, so increasing ``a`` is lexicographic order of the
assignment tuple.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("GRAPHFAIR_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

CHUNK = 1 << 16
INT64_SAFE = 1 << 62


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# -- numpy reference path --------------------------------------------------


def subset_table_np(nv, eu, ev, ew):
    """Maximum-weight matching value of ``G[mask]`` for every vertex mask.

    Recurrence on the highest vertex ``h`` of the mask: either ``h`` stays
    unmatched or it is matched to a lower neighbour ``u``.
    """
    dtype = ew.dtype
    table = np.zeros(1 << nv, dtype=dtype)
    for h in range(nv):
        lo = 1 << h
        sub = np.arange(lo, dtype=np.int64)
        best = table[:lo].copy()
        for k in range(len(eu)):
            u, v = int(eu[k]), int(ev[k])
            if v != h:
                u, v = v, u
            if v != h or u > h:
                continue
            has_u = (sub >> u) & 1
            cand = table[sub ^ (1 << u)] + ew[k]
            best = np.where(has_u.astype(bool) & (cand > best), cand, best)
        table[lo : 2 * lo] = best
    return table


def drop_one_table_np(table, nv):
    """``out[mask] = min over v in mask of table[mask - v]``; ``out[0] = 0``."""
    out = table.copy()
    masks = np.arange(1 << nv, dtype=np.int64)
    for v in range(nv):
        sel = ((masks >> v) & 1).astype(bool)
        sub = table[masks[sel] ^ (1 << v)]
        out[sel] = np.where(sub < out[sel], sub, out[sel])
    return out


def _chunk_masks(start, stop, n, nv):
    a = np.arange(start, stop, dtype=np.int64)
    masks = np.zeros((n, stop - start), dtype=np.int64)
    rest = a
    # Peel digits from the least significant end: vertex nv-1 first.
    for v in range(nv - 1, -1, -1):
        d = rest % n
        rest = rest // n
        for j in range(n):
            masks[j] |= (d == j).astype(np.int64) << v
    return masks


def _scan_np(score_fn, n, nv):
    total = n**nv
    best_val = None
    best_idx = -1
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        vals, ok = score_fn(_chunk_masks(start, stop, n, nv))
        if ok is not None:
            if not ok.any():
                continue
            idx = np.flatnonzero(ok)
            vals = vals[idx]
            k = int(np.argmax(vals))
            local, v = int(idx[k]), vals[k]
        else:
            k = int(np.argmax(vals))
            local, v = k, vals[k]
        if best_idx < 0 or v > best_val:
            best_val, best_idx = v, start + local
    return best_val, best_idx


def enum_max_min_np(tables, n, nv):
    def score(masks):
        vals = tables[0][masks[0]]
        for j in range(1, n):
            vals = np.minimum(vals, tables[j][masks[j]])
        return vals, None

    return _scan_np(score, n, nv)


def enum_max_sum_np(tables, n, nv):
    def score(masks):
        vals = tables[0][masks[0]]
        for j in range(1, n):
            vals = vals + tables[j][masks[j]]
        return vals, None

    return _scan_np(score, n, nv)


def enum_max_sum_ef1_np(tables, drops, n, nv):
    def score(masks):
        own = [tables[i][masks[i]] for i in range(n)]
        vals = own[0]
        for j in range(1, n):
            vals = vals + own[j]
        ok = np.ones(masks.shape[1], dtype=bool)
        for i in range(n):
            for j in range(n):
                if i != j:
                    ok &= own[i] >= drops[i][masks[j]]
        return vals, ok

    return _scan_np(score, n, nv)


# -- numba path ------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _subset_table_nb(nv, eu, ev, ew):
        table = np.zeros(1 << nv, dtype=np.int64)
        for h in range(nv):
            lo = 1 << h
            for sub in range(lo):
                best = table[sub]
                for k in range(eu.shape[0]):
                    u = eu[k]
                    v = ev[k]
                    if v != h:
                        u, v = v, u
                    if v != h or u > h:
                        continue
                    if (sub >> u) & 1:
                        cand = table[sub ^ (1 << u)] + ew[k]
                        if cand > best:
                            best = cand
                table[lo + sub] = best
        return table

    @njit(cache=True)
    def _drop_one_table_nb(table, nv):
        out = table.copy()
        for mask in range(1, 1 << nv):
            m = out[mask]
            for v in range(nv):
                if (mask >> v) & 1:
                    c = table[mask ^ (1 << v)]
                    if c < m:
                        m = c
            out[mask] = m
        return out

    @njit(cache=True)
    def _enum_nb(tables, drops, n, nv, mode):
        # mode 0: max-min, 1: max-sum, 2: max-sum over EF1 allocations.
        total = 1
        for _ in range(nv):
            total *= n
        digits = np.zeros(nv, dtype=np.int64)
        masks = np.zeros(n, dtype=np.int64)
        masks[0] = (1 << nv) - 1
        best_val = np.int64(0)
        best_idx = -1
        own = np.zeros(n, dtype=np.int64)
        for a in range(total):
            for i in range(n):
                own[i] = tables[i, masks[i]]
            feasible = True
            if mode == 0:
                val = own[0]
                for i in range(1, n):
                    if own[i] < val:
                        val = own[i]
            else:
                val = np.int64(0)
                for i in range(n):
                    val += own[i]
                if mode == 2:
                    for i in range(n):
                        for j in range(n):
                            if i != j and own[i] < drops[i, masks[j]]:
                                feasible = False
            if feasible and (best_idx < 0 or val > best_val):
                best_val = val
                best_idx = a
            # Odometer step; vertex nv-1 is the least significant digit.
            v = nv - 1
            while v >= 0:
                bit = np.int64(1) << v
                masks[digits[v]] ^= bit
                digits[v] += 1
                if digits[v] == n:
                    digits[v] = 0
                    masks[0] |= bit
                    v -= 1
                else:
                    masks[digits[v]] |= bit
                    break
        return best_val, best_idx


# -- dispatch --------------------------------------------------------------


def _use_numba(*arrays) -> bool:
    return HAVE_NUMBA and all(a.dtype == np.int64 for a in arrays)


def subset_table(nv, eu, ev, ew):
    if _use_numba(ew):
        return _subset_table_nb(nv, eu.astype(np.int64), ev.astype(np.int64), ew)
    return subset_table_np(nv, eu, ev, ew)


def drop_one_table(table, nv):
    if _use_numba(table):
        return _drop_one_table_nb(table, nv)
    return drop_one_table_np(table, nv)


def enum_max_min(tables, n, nv):
    if _use_numba(tables):
        v, a = _enum_nb(tables, tables, n, nv, 0)
        return int(v), int(a)
    v, a = enum_max_min_np(tables, n, nv)
    return int(v), a


def enum_max_sum(tables, n, nv):
    if _use_numba(tables):
        v, a = _enum_nb(tables, tables, n, nv, 1)
        return int(v), int(a)
    v, a = enum_max_sum_np(tables, n, nv)
    return int(v), a


def enum_max_sum_ef1(tables, drops, n, nv):
    if _use_numba(tables, drops):
        v, a = _enum_nb(tables, drops, n, nv, 2)
        return (int(v), int(a)) if a >= 0 else (None, -1)
    v, a = enum_max_sum_ef1_np(tables, drops, n, nv)
    return (int(v), a) if a >= 0 else (None, -1)


def decode_assignment(a: int, n: int, nv: int) -> list[int]:
    digits = [0] * nv
    for v in range(nv - 1, -1, -1):
        a, digits[v] = divmod(a, n)
    return digits

"""Compiled inner loops for the exhaustive sweeps.

An r=1 weighting of K_n is packed into an int64 ``mask`` (bit i set <=> edge i
is +1), so n <= 11 fits.  All kernels release the GIL and operate on disjoint
index ranges, which is how the auditor parallelises them.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np
from numba import njit

from .weightings import edge_count, edge_index

MAX_PACKED_N = 11

# counter slots returned by threshold_chunk
T_SELECTED_MIN = 0
T_SELECTED_SUM = 1
T_FILTER_MISMATCH = 2
T_K4_FREE = 3
T_SHARP_POS = 4
T_SHARP_EITHER = 5
T_LEMMA_FAIL = 6
T_THEOREM_FAIL = 7
T_BAD = 8
T_NSLOTS = 9


@lru_cache(maxsize=None)
def subset_masks(n: int, size: int) -> np.ndarray:
    """Edge bitmask of every ``size``-subset of vertices, lexicographic order."""
    out = []
    for s in combinations(range(n), size):
        m = 0
        for u, v in combinations(s, 2):
            m |= 1 << edge_index(u, v, n)
        out.append(m)
    return np.array(out, dtype=np.int64)


@lru_cache(maxsize=None)
def pair_table(n: int) -> np.ndarray:
    t = np.full((n, n), -1, dtype=np.int64)
    for u, v in combinations(range(n), 2):
        t[u, v] = t[v, u] = edge_index(u, v, n)
    return t


@lru_cache(maxsize=None)
def star_masks(n: int) -> np.ndarray:
    """Edge bitmask of the edges incident to each vertex."""
    out = np.zeros(n, dtype=np.int64)
    for u, v in combinations(range(n), 2):
        b = 1 << edge_index(u, v, n)
        out[u] |= b
        out[v] |= b
    return out


def full_mask(n: int) -> int:
    return (1 << edge_count(n)) - 1


@njit(cache=True, nogil=True)
def popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    x = x + (x >> 8)
    x = x + (x >> 16)
    x = x + (x >> 32)
    return x & 0x7F


@njit(cache=True, nogil=True)
def k4_free_direct(mask, quads):
    """No 4-subset carries exactly three negative edges."""
    for i in range(quads.shape[0]):
        q = quads[i]
        if popcount(q & ~mask) == 3:
            return False
    return True


@njit(cache=True, nogil=True)
def has_triangle(edges, triples):
    for i in range(triples.shape[0]):
        t = triples[i]
        if edges & t == t:
            return True
    return False


@njit(cache=True, nogil=True)
def _adjacency(edges, n, ptab, adj):
    for u in range(n):
        row = 0
        for v in range(n):
            if u != v and (edges >> ptab[u, v]) & 1:
                row |= 1 << v
        adj[u] = row


@njit(cache=True, nogil=True)
def forbidden_pattern(adj, n):
    """Search by adjacency for an induced K_{1,3}, K_3+K_1 or P_3.

    Returns 1, 2, 3 for the first pattern family found (in that order), else 0.
    """
    # K_{1,3}: centre with three pairwise non-adjacent neighbours
    for c in range(n):
        for a in range(n):
            if not (adj[c] >> a) & 1:
                continue
            for b in range(a + 1, n):
                if not (adj[c] >> b) & 1 or (adj[a] >> b) & 1:
                    continue
                for d in range(b + 1, n):
                    if (adj[c] >> d) & 1 and not (adj[a] >> d) & 1 and not (adj[b] >> d) & 1:
                        return 1
    # K_3 + K_1: triangle plus a vertex adjacent to none of it
    for a in range(n):
        for b in range(a + 1, n):
            if not (adj[a] >> b) & 1:
                continue
            for c in range(b + 1, n):
                if (adj[a] >> c) & 1 and (adj[b] >> c) & 1:
                    tri = (1 << a) | (1 << b) | (1 << c)
                    for d in range(n):
                        if not (tri >> d) & 1 and adj[d] & tri == 0:
                            return 2
    # P_3: a-b-c-d with a~c, b~d, a~d all absent
    for b in range(n):
        for c in range(n):
            if b == c or not (adj[b] >> c) & 1:
                continue
            for a in range(n):
                if a == c or not (adj[b] >> a) & 1 or (adj[a] >> c) & 1:
                    continue
                for d in range(n):
                    if d == a or d == b or not (adj[c] >> d) & 1:
                        continue
                    if not (adj[b] >> d) & 1 and not (adj[a] >> d) & 1:
                        return 3
    return 0


@njit(cache=True, nogil=True)
def k4_free_structural(mask, n, ptab, adj):
    """Zero-sum-K4-freeness decided on the (-1)-graph by induced-pattern search."""
    _adjacency(~mask, n, ptab, adj)
    return forbidden_pattern(adj, n) == 0


@njit(cache=True, nogil=True)
def _record(buf_first, buf_last, nbad, value, cap):
    if nbad < cap:
        buf_first[nbad] = value
    buf_last[nbad % cap] = value


@njit(cache=True, nogil=True)
def threshold_chunk(lo, hi, n_edges, h, quads, triples, full, halve, cap, counters,
                    bad_first, bad_last):
    """Sweep masks in [lo, hi); if ``halve`` each mask also stands for its complement.

    A mask is bad when it breaks the threshold statement (selected yet
    zero-sum-K4-free), the one-side-triangle-free property, or the agreement of
    the min-count and total-sum filters.  Returns the number of bad masks seen
    in [lo, hi); when halving, complements are implied and not counted here.
    """
    g = 2 * h
    nbad = 0
    for mask in range(lo, hi):
        e1 = popcount(mask)
        em = n_edges - e1
        mn = e1 if e1 < em else em
        s = e1 - em
        sel_min = mn >= h
        sel_sum = abs(s) <= n_edges - g
        free = k4_free_direct(mask, quads)
        bad = False
        mult = 2 if halve else 1
        if sel_min:
            counters[T_SELECTED_MIN] += mult
        if sel_sum:
            counters[T_SELECTED_SUM] += mult
        if sel_min != sel_sum:
            counters[T_FILTER_MISMATCH] += mult
            bad = True
        if free:
            counters[T_K4_FREE] += mult
            if e1 == h - 1:
                counters[T_SHARP_POS] += 1
            if halve and em == h - 1:
                counters[T_SHARP_POS] += 1
            if mn == h - 1:
                counters[T_SHARP_EITHER] += mult
            if has_triangle(mask, triples) and has_triangle(full & ~mask, triples):
                counters[T_LEMMA_FAIL] += mult
                bad = True
            if sel_min:
                counters[T_THEOREM_FAIL] += mult
                bad = True
        if bad:
            counters[T_BAD] += mult
            _record(bad_first, bad_last, nbad, mask, cap)
            nbad += 1
    return nbad


@njit(cache=True, nogil=True)
def agreement_range(lo, hi, n, quads, ptab):
    """Count (free, disagreements) between direct and structural paths on [lo, hi)."""
    adj = np.zeros(n, dtype=np.int64)
    free = 0
    disagree = 0
    for mask in range(lo, hi):
        a = k4_free_direct(mask, quads)
        b = k4_free_structural(mask, n, ptab, adj)
        if a:
            free += 1
        if a != b:
            disagree += 1
    return free, disagree


@njit(cache=True, nogil=True)
def agreement_masks(masks, n, quads, ptab):
    adj = np.zeros(n, dtype=np.int64)
    free = 0
    disagree = 0
    for i in range(masks.shape[0]):
        a = k4_free_direct(masks[i], quads)
        b = k4_free_structural(masks[i], n, ptab, adj)
        if a:
            free += 1
        if a != b:
            disagree += 1
    return free, disagree


@njit(cache=True, nogil=True)
def next_same_popcount(v):
    """Gosper's hack: the next larger integer with the same number of set bits."""
    c = v & -v
    r = v + c
    return (((r ^ v) >> 2) // c) | r


@njit(cache=True, nogil=True)
def extremal_chunk(start, count, n, quads, stars, target_hist, free_buf, match_buf):
    """Walk ``count`` equal-popcount masks from ``start`` in increasing order.

    Collects masks that are zero-sum-K4-free and masks whose (+1)-graph degree
    histogram equals ``target_hist``.  Returns the two totals; buffers hold the
    first entries up to their capacity.
    """
    hist = np.zeros(n, dtype=np.int64)
    nfree = 0
    nmatch = 0
    mask = start
    for _ in range(count):
        if k4_free_direct(mask, quads):
            if nfree < free_buf.shape[0]:
                free_buf[nfree] = mask
            nfree += 1
        hist[:] = 0
        for v in range(n):
            hist[popcount(mask & stars[v])] += 1
        same = True
        for d in range(n):
            if hist[d] != target_hist[d]:
                same = False
                break
        if same:
            if nmatch < match_buf.shape[0]:
                match_buf[nmatch] = mask
            nmatch += 1
        mask = next_same_popcount(mask)
    return nfree, nmatch


@njit(cache=True, nogil=True)
def triangle_free_class_chunk(lo, hi, quads, triples, out):
    """Graphs (as edge masks) in [lo, hi) that are triangle-free with no 4-set
    inducing exactly 3 edges.  Returns how many; ``out`` keeps the first ones."""
    found = 0
    for g in range(lo, hi):
        if has_triangle(g, triples):
            continue
        ok = True
        for i in range(quads.shape[0]):
            if popcount(g & quads[i]) == 3:
                ok = False
                break
        if ok:
            if found < out.shape[0]:
                out[found] = g
            found += 1
    return found

"""Compiled weighted A* inner loop over the padded blocked mask.

Per-cell buffers are reused across searches; an entry is valid only when its
stamp equals the current search's epoch, so nothing is cleared between runs.
"""

from __future__ import annotations

import threading

import numpy as np
from numba import njit

FOUND, BUDGET, SPACE = 0, 1, 2


@njit(cache=True, inline="always")
def _less(hf, hg, ht, a, b):
    if hf[a] != hf[b]:
        return hf[a] < hf[b]
    if hg[a] != hg[b]:
        return hg[a] > hg[b]
    return ht[a] < ht[b]


@njit(cache=True)
def _swap(hf, hg, ht, hn, a, b):
    hf[a], hf[b] = hf[b], hf[a]
    hg[a], hg[b] = hg[b], hg[a]
    ht[a], ht[b] = ht[b], ht[a]
    hn[a], hn[b] = hn[b], hn[a]


@njit(cache=True)
def _octile(idx, width, gi, gj, c_hv, c_d):
    i = idx // width
    j = idx - i * width
    di = abs(i - gi)
    dj = abs(j - gj)
    if di < dj:
        return c_d * di + c_hv * (dj - di)
    return c_d * dj + c_hv * (di - dj)


@njit(cache=True)
def wastar_kernel(blk, width, start, goal, num, den, limit, moves,
                  gcost, seen, closed, parent, epoch, c_hv, c_d):
    """Returns (outcome, expansions, generated, n_seen, n_closed, lower_bound)."""
    gi = goal // width
    gj = goal - gi * width
    cap = 64
    hf = np.empty(cap, np.int64)
    hg = np.empty(cap, np.int64)
    ht = np.empty(cap, np.int64)
    hn = np.empty(cap, np.int64)
    size = 0
    tie = 0

    seen[start] = epoch
    gcost[start] = 0
    parent[start] = -1
    hf[0] = num * _octile(start, width, gi, gj, c_hv, c_d)
    hg[0] = 0
    ht[0] = 0
    hn[0] = start
    size = 1
    tie = 1
    n_seen = 1
    n_closed = 0
    expansions = 0
    generated = 1
    outcome = SPACE
    nmoves = moves.shape[0]

    while size > 0:
        # pop
        cur = hn[0]
        gc = hg[0]
        size -= 1
        if size > 0:
            hf[0] = hf[size]
            hg[0] = hg[size]
            ht[0] = ht[size]
            hn[0] = hn[size]
            k = 0
            while True:
                l = 2 * k + 1
                if l >= size:
                    break
                m = l
                r = l + 1
                if r < size and _less(hf, hg, ht, r, l):
                    m = r
                if _less(hf, hg, ht, m, k):
                    _swap(hf, hg, ht, hn, m, k)
                    k = m
                else:
                    break
        if closed[cur] == epoch or gc != gcost[cur]:
            continue
        if cur == goal:
            outcome = FOUND
            break
        if expansions == limit:
            outcome = BUDGET
            break
        closed[cur] = epoch
        n_closed += 1
        expansions += 1
        for t in range(nmoves):
            nb = cur + moves[t, 0]
            if blk[nb] or closed[nb] == epoch:
                continue
            ca = moves[t, 2]
            if ca != 0 and (blk[cur + ca] or blk[cur + moves[t, 3]]):
                continue
            ng = gc + moves[t, 1]
            if seen[nb] == epoch:
                if ng >= gcost[nb]:
                    continue
            else:
                seen[nb] = epoch
                n_seen += 1
            gcost[nb] = ng
            parent[nb] = cur
            generated += 1
            if size == cap:
                cap *= 2
                hf2 = np.empty(cap, np.int64)
                hg2 = np.empty(cap, np.int64)
                ht2 = np.empty(cap, np.int64)
                hn2 = np.empty(cap, np.int64)
                hf2[:size] = hf[:size]
                hg2[:size] = hg[:size]
                ht2[:size] = ht[:size]
                hn2[:size] = hn[:size]
                hf, hg, ht, hn = hf2, hg2, ht2, hn2
            k = size
            hf[k] = ng * den + num * _octile(nb, width, gi, gj, c_hv, c_d)
            hg[k] = ng
            ht[k] = tie
            hn[k] = nb
            tie += 1
            size += 1
            while k > 0:
                p = (k - 1) // 2
                if _less(hf, hg, ht, k, p):
                    _swap(hf, hg, ht, hn, k, p)
                    k = p
                else:
                    break

    lower = -1
    if outcome == BUDGET:
        for q in range(size):
            idx = hn[q]
            if closed[idx] == epoch or hg[q] != gcost[idx]:
                continue
            v = hg[q] + _octile(idx, width, gi, gj, c_hv, c_d)
            if lower < 0 or v < lower:
                lower = v
        # the entry popped when the budget ran out
        v = gc + _octile(cur, width, gi, gj, c_hv, c_d)
        if lower < 0 or v < lower:
            lower = v
    return outcome, expansions, generated, n_seen, n_closed, lower


@njit(cache=True)
def trace_path(parent, goal, width):
    """(row, col) pairs from start to goal, unpadded."""
    n = 0
    cur = goal
    while cur != -1:
        n += 1
        cur = parent[cur]
    out = np.empty((n, 2), np.int64)
    cur = goal
    for k in range(n - 1, -1, -1):
        i = cur // width
        out[k, 0] = i - 1
        out[k, 1] = cur - i * width - 1
        cur = parent[cur]
    return out


class Workspace:
    def __init__(self, size: int):
        self.gcost = np.zeros(size, np.int64)
        self.seen = np.zeros(size, np.int64)
        self.closed = np.zeros(size, np.int64)
        self.parent = np.zeros(size, np.int64)
        self.epoch = 0


_local = threading.local()


def workspace(size: int) -> Workspace:
    """Per-thread buffers for padded grids of ``size`` cells."""
    cache = getattr(_local, "cache", None)
    if cache is None:
        cache = _local.cache = {}
    ws = cache.get(size)
    if ws is None:
        ws = cache[size] = Workspace(size)
    ws.epoch += 1
    return ws

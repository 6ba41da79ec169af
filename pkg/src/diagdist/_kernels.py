"""Compiled inner loops for the layer-by-layer subset search.

A layer is every ``a``-subset of ``range(n)``.  It is split into tasks by the
smallest element ``m``; task ``m`` walks the ``(a-1)``-subsets of
``m+1 .. n-1`` in revolving-door order (Knuth, Algorithm 7.2.1.3R), so each
step swaps one vertex out and one in and the parity vector needs exactly two
row XORs.
"""

from __future__ import annotations

import os

import numba as nb
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    nb.config.THREADING_LAYER = "workqueue"

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)


@nb.njit(inline="always", cache=True)
def _popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@nb.njit(cache=True)
def _rd_next(c, t):
    # c[1..t] is the current combination (c[1] < ... < c[t]), c[t+1] = universe size.
    # Returns (removed, added), or (-1, -1) after the last combination.
    if t & 1:
        if c[1] + 1 < c[2]:
            c[1] += 1
            return c[1] - 1, c[1]
        state = 4
    else:
        if c[1] > 0:
            c[1] -= 1
            return c[1] + 1, c[1]
        state = 5
    j = 2
    while j <= t:
        if state == 4:
            if c[j] >= j:
                out = c[j]
                c[j] = c[j - 1]
                c[j - 1] = j - 2
                return out, j - 2
            state = 5
        else:
            if c[j] + 1 < c[j + 1]:
                c[j - 1] = c[j]
                c[j] += 1
                return j - 2, c[j]
            state = 4
        j += 1
    return -1, -1


@nb.njit(cache=True)
def revolving_door_masks(n, t):
    """All ``t``-subsets of ``range(n)`` as bitmasks, in visiting order (n < 63)."""
    out = []
    c = np.empty(t + 2, np.int64)
    for j in range(1, t + 1):
        c[j] = j - 1
    c[t + 1] = n
    while True:
        m = 0
        for j in range(1, t + 1):
            m |= 1 << c[j]
        out.append(m)
        o, _ = _rd_next(c, t)
        if o < 0:
            break
    return out


@nb.njit(cache=True)
def _scan_task(words, n, a, m, threshold, budget, combo_out):
    """Scan the ``a``-subsets whose smallest element is ``m``.

    Keeps the first subset (in visiting order) whose ``|B|`` is below
    ``threshold`` and, after that, strictly below the best seen.  Returns
    ``(best_b, nodes, finished)``; ``best_b == threshold`` means no hit.
    """
    W = words.shape[1]
    t = a - 1
    base = m + 1
    s = np.zeros(W, np.uint64)
    amask = np.zeros(W, np.uint64)
    c = np.empty(t + 2, np.int64)
    for j in range(1, t + 1):
        c[j] = j - 1
    c[t + 1] = n - base
    for w in range(W):
        s[w] = words[m, w]
    amask[m >> 6] |= _ONE << np.uint64(m & 63)
    for j in range(1, t + 1):
        v = base + c[j]
        for w in range(W):
            s[w] ^= words[v, w]
        amask[v >> 6] |= _ONE << np.uint64(v & 63)

    best = threshold
    nodes = 0
    while True:
        if nodes >= budget:
            return best, nodes, False
        nodes += 1
        b = 0
        for w in range(W):
            b += _popcount(s[w] & ~amask[w])
        if b < best:
            best = b
            combo_out[0] = m
            for j in range(1, t + 1):
                combo_out[j] = base + c[j]
        if t == 0:
            break
        o, i = _rd_next(c, t)
        if o < 0:
            break
        o += base
        i += base
        for w in range(W):
            s[w] ^= words[o, w] ^ words[i, w]
        amask[o >> 6] ^= _ONE << np.uint64(o & 63)
        amask[i >> 6] ^= _ONE << np.uint64(i & 63)
    return best, nodes, True


@nb.njit(cache=True)
def scan_layer_serial(words, n, a, threshold, budget):
    """Scan a whole layer in task order with a running threshold.

    Returns ``(best_b, combo, nodes, finished)``.
    """
    combo = np.full(a, -1, np.int64)
    scratch = np.empty(a, np.int64)
    best = threshold
    nodes = 0
    for m in range(n - a + 1):
        got, used, done = _scan_task(words, n, a, m, best, budget - nodes, scratch)
        nodes += used
        if got < best:
            best = got
            combo[:] = scratch
        if not done:
            return best, combo, nodes, False
    return best, combo, nodes, True


@nb.njit(parallel=True, cache=True)
def scan_layer_parallel(words, n, a, threshold):
    """Same result as :func:`scan_layer_serial` without a budget, tasks spread over threads."""
    tasks = n - a + 1
    bests = np.empty(tasks, np.int64)
    nodes = np.empty(tasks, np.int64)
    combos = np.full((tasks, a), -1, np.int64)
    big = np.int64(1) << 62
    for m in nb.prange(tasks):
        got, used, _ = _scan_task(words, n, a, m, threshold, big, combos[m])
        bests[m] = got
        nodes[m] = used
    best = threshold
    pick = -1
    for m in range(tasks):
        if bests[m] < best:
            best = bests[m]
            pick = m
    combo = np.full(a, -1, np.int64)
    if pick >= 0:
        combo[:] = combos[pick]
    return best, combo, nodes.sum(), True

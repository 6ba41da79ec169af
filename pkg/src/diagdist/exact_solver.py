"""Exact diagonal distance by layered subset search.

``f(G) = min |A| + |B(A)|`` over nonempty ``A``.  Since every ``a``-subset
costs at least ``a``, layers ``a = 1, 2, ...`` are scanned only while
``a < best``, where ``best`` starts from the min-degree and pair bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import _kernels
from .flip_game import Witness
from .graph_core import Graph, GraphError, VertexSet, min_degree

DEFAULT_BUDGET = 10**9
NAIVE_MAX_N = 22

SOURCE_MINDEG = "min-degree"
SOURCE_PAIR = "pair"
SOURCE_SEARCH = "search"


@dataclass(frozen=True)
class SolveResult:
    f: int
    witness: Witness
    nodes_explored: int
    bound_source: str
    proven_optimal: bool = True
    # (a, subsets visited, best bound when layer a started)
    layer_nodes: Tuple[Tuple[int, int, int], ...] = field(default=())

    def __post_init__(self):
        if self.f != self.witness.cost:
            raise GraphError("result value disagrees with its witness")
        if self.f < 1:
            raise GraphError("diagonal distance is at least 1")


def upper_bound_mindeg(G: Graph) -> Tuple[int, Witness]:
    """``delta(G) + 1`` via ``A = {v}`` for the first vertex of minimum degree."""
    d = min_degree(G)
    v = next(u for u in range(G.n) if G.rows[u].bit_count() == d)
    w = Witness.build(G, VertexSet(G.n, 1 << v))
    return w.cost, w


def upper_bound_pairs(G: Graph) -> Tuple[int, Witness]:
    """``2 + min |(N(x) ^ N(y)) - {x, y}|`` over unordered pairs, first minimiser kept."""
    if G.n < 2:
        raise GraphError("pair bound needs at least two vertices")
    rows = G.rows
    best, arg = None, None
    for x in range(G.n):
        rx = rows[x]
        for y in range(x + 1, G.n):
            d = ((rx ^ rows[y]) & ~((1 << x) | (1 << y))).bit_count()
            if best is None or d < best:
                best, arg = d, (x, y)
                if d == 0:
                    break
        if best == 0:
            break
    w = Witness.build(G, VertexSet.of(G.n, arg))
    return w.cost, w


def initial_bound(G: Graph) -> Tuple[int, Witness, str]:
    bound, wit = upper_bound_mindeg(G)
    source = SOURCE_MINDEG
    if G.n >= 2:
        pb, pw = upper_bound_pairs(G)
        if pb < bound:
            bound, wit, source = pb, pw, SOURCE_PAIR
    return bound, wit, source


def diagonal_distance(G: Graph, budget: Optional[int] = DEFAULT_BUDGET, threads: int = 1) -> SolveResult:
    """Exact ``f(G)``, or the best upper bound found if ``budget`` subsets run out.

    ``budget`` counts visited subsets (one parity update each); ``None`` means
    unlimited.  ``threads > 1`` scans fully-affordable layers in parallel; the
    returned witness and counters do not depend on ``threads``.
    """
    best, wit, source = initial_bound(G)
    remaining = (1 << 62) if budget is None else int(budget)
    words = G.words
    total = 0
    layers = []
    proven = True
    if threads > 1:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    a = 1
    while a < best and a <= G.n:
        best_before = best
        threshold = best - a  # |B| must be strictly below this to improve
        size = math.comb(G.n, a)
        if threads > 1 and size <= remaining:
            b, combo, used, done = _kernels.scan_layer_parallel(words, G.n, a, threshold)
        else:
            b, combo, used, done = _kernels.scan_layer_serial(words, G.n, a, threshold, remaining)
        used = int(used)
        total += used
        remaining -= used
        layers.append((a, used, best_before))
        if b < threshold:
            wit = Witness.build(G, VertexSet.of(G.n, combo.tolist()))
            best, source = wit.cost, SOURCE_SEARCH
        if not done:
            proven = False
            break
        a += 1
    return SolveResult(best, wit, total, source, proven, tuple(layers))


def naive_diagonal_distance(G: Graph) -> SolveResult:
    """Reference oracle: every nonempty subset, parity counted vertex by vertex."""
    if G.n > NAIVE_MAX_N:
        raise GraphError(f"naive enumeration is capped at n <= {NAIVE_MAX_N}")
    rows = G.rows
    best, arg = None, None
    for A in range(1, 1 << G.n):
        cost = 0
        for x in range(G.n):
            if A >> x & 1:
                cost += 1
            elif (rows[x] & A).bit_count() % 2 == 1:
                cost += 1
        if best is None or cost < best:
            best, arg = cost, A
    wit = Witness.build(G, VertexSet(G.n, arg))
    return SolveResult(best, wit, (1 << G.n) - 1, SOURCE_SEARCH)


def revolving_door(n: int, t: int) -> list:
    """The ``t``-subsets of ``range(n)`` as bitmasks in the solver's visiting order."""
    if not 1 <= t <= n or n > 62:
        raise GraphError("need 1 <= t <= n <= 62")
    return list(_kernels.revolving_door_masks(n, t))


def layer_order(n: int, a: int) -> list:
    """Full visiting order of layer ``a``: tasks by smallest element, revolving door inside."""
    if not 1 <= a <= n or n > 62:
        raise GraphError("need 1 <= a <= n <= 62")
    out = []
    for m in range(n - a + 1):
        if a == 1:
            out.append(1 << m)
            continue
        base = m + 1
        for mask in revolving_door(n - base, a - 1):
            out.append((mask << base) | 1 << m)
    return out

"""Upper bounds on f(G) beyond exact reach, by pairing sets with close images.

If two ``a``-sets ``A != A'`` have images ``B(A)``, ``B(A')`` at small Hamming
distance, then ``A ^ A'`` is a cheap witness: the only vertices outside it with
odd parity lie in ``(B ^ B') | (A & A')``.  Here the pairs are found by random
sampling plus nearest-neighbour bucketing on random bit windows, and each
candidate is scored with its exact cost.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from . import analytic
from .exact_solver import upper_bound_mindeg, upper_bound_pairs
from .flip_game import Witness
from .graph_core import Graph, GraphError, VertexSet

WINDOWS = 8
NEIGHBOURS = 6


@dataclass(frozen=True)
class PairCandidate:
    A: VertexSet
    A_prime: VertexSet
    hamming: int
    candidate: VertexSet
    exact_cost: int
    overestimate: int

    def __post_init__(self):
        if not self.candidate:
            raise GraphError("paired sets must differ")

    def witness(self, G: Graph) -> Witness:
        return Witness.build(G, self.candidate)


def _words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(row.astype("<u8").tobytes(), "little")


def _sample_sets(n: int, a: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """``(k, a)`` vertex indices; every ``a``-set once if that is no more than ``samples``."""
    total = math.comb(n, a)
    if total <= samples:
        return np.array(list(combinations(range(n), a)), dtype=np.int64).reshape(total, a)
    keys = rng.random((samples, n))
    idx = np.argsort(keys, axis=1, kind="stable")[:, :a]
    idx.sort(axis=1)
    # drop repeated draws, keep first occurrence order
    _, first = np.unique(idx, axis=0, return_index=True)
    return idx[np.sort(first)]


def _parity_images(words: np.ndarray, idx: np.ndarray, threads: int) -> np.ndarray:
    def chunk(rows):
        return np.bitwise_xor.reduce(words[rows], axis=1)

    if threads <= 1 or len(idx) < 2 * threads:
        return chunk(idx)
    parts = np.array_split(idx, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.concatenate(list(pool.map(chunk, parts)))


def _set_masks(n: int, idx: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros((len(idx), width), dtype=np.uint64)
    rows = np.arange(len(idx))[:, None]
    np.bitwise_or.at(out, (np.broadcast_to(rows, idx.shape), idx // 64),
                     np.left_shift(np.uint64(1), (idx % 64).astype(np.uint64)))
    return out


def _candidate_pairs(images: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Index pairs ``i < j`` that fall near each other on some random bit window."""
    k = len(images)
    if k * (k - 1) // 2 <= 20000:
        return np.array(list(combinations(range(k), 2)), dtype=np.int64).reshape(-1, 2)
    bits = np.unpackbits(images.view(np.uint8), axis=1, bitorder="little")[:, :n]
    width = min(n, max(4, int(math.log2(k)) + 2), 62)
    weights = np.left_shift(np.uint64(1), np.arange(width, dtype=np.uint64))
    pairs = []
    for _ in range(WINDOWS):
        cols = rng.choice(n, size=width, replace=False)
        keys = (bits[:, cols].astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        order = np.argsort(keys, kind="stable")
        for step in range(1, NEIGHBOURS + 1):
            i, j = order[:-step], order[step:]
            pairs.append(np.stack([np.minimum(i, j), np.maximum(i, j)], axis=1))
    return np.unique(np.concatenate(pairs), axis=0)


def pair_search(G: Graph, a: int, samples: int, seed: int, threads: int = 1) -> PairCandidate:
    """Best ``A ^ A'`` witness among sampled ``a``-sets whose images are close."""
    if not 1 <= a <= G.n:
        raise GraphError(f"set size a={a} outside [1, {G.n}]")
    if samples < 2:
        raise GraphError("need at least two samples")
    if math.comb(G.n, a) < 2:
        raise GraphError(f"n={G.n} has fewer than two {a}-sets")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & ((1 << 64) - 1)))
    words = G.words
    idx = _sample_sets(G.n, a, samples, rng)
    if len(idx) < 2:
        raise GraphError("sampling produced fewer than two distinct sets")
    parity = _parity_images(words, idx, threads)
    amask = _set_masks(G.n, idx, words.shape[1])
    images = parity & ~amask
    pairs = _candidate_pairs(images, G.n, rng)
    i, j = pairs[:, 0], pairs[:, 1]
    ham = np.bitwise_count(images[i] ^ images[j]).sum(axis=1)
    sym = amask[i] ^ amask[j]
    outside = (parity[i] ^ parity[j]) & ~sym
    exact = np.bitwise_count(sym).sum(axis=1) + np.bitwise_count(outside).sum(axis=1)
    over = np.bitwise_count(sym).sum(axis=1) + np.bitwise_count(
        (images[i] ^ images[j]) | (amask[i] & amask[j])
    ).sum(axis=1)
    best = np.lexsort((j, i, ham, exact))[0]
    bi, bj = int(i[best]), int(j[best])
    A = VertexSet(G.n, _words_to_int(amask[bi]))
    Ap = VertexSet(G.n, _words_to_int(amask[bj]))
    return PairCandidate(A, Ap, int(ham[best]), A ^ Ap, int(exact[best]), int(over[best]))


def a_schedule(n: int) -> List[int]:
    """Set sizes tried by :func:`best_witness`: 1, 2, 3 and the two optimum fractions of n."""
    c = analytic.constants()
    raw = [1, 2, 3, round(c.alpha_half * n), round(2 * c.lambda0 / 3 * n)]
    return sorted({a for a in raw if 1 <= a <= n and math.comb(n, a) >= 2})


def best_witness(G: Graph, effort: int = 2000, seed: int = 0, threads: int = 1) -> Witness:
    """Cheapest witness among the min-degree bound, the pair bound and pair searches."""
    _, best = upper_bound_mindeg(G)
    if G.n >= 2:
        _, pw = upper_bound_pairs(G)
        if pw.cost < best.cost:
            best = pw
    if effort >= 2:
        for k, a in enumerate(a_schedule(G.n)):
            cand = pair_search(G, a, effort, seed=(int(seed) * 1_000_003 + k) & ((1 << 64) - 1), threads=threads)
            if cand.exact_cost < best.cost:
                best = cand.witness(G)
    return best


def closest_image_pair(G: Graph, a: int) -> Tuple[int, Optional[Tuple[VertexSet, VertexSet]]]:
    """Minimum ``|B(A) ^ B(A')|`` over all pairs of distinct ``a``-sets (small n only)."""
    if G.n > 14:
        raise GraphError("exhaustive pairing is limited to n <= 14")
    images = []
    for combo in combinations(range(G.n), a):
        A = VertexSet.of(G.n, combo)
        s = 0
        for v in combo:
            s ^= G.rows[v]
        images.append((s & ~A.bits, A))
    best, arg = None, None
    for (b1, A1), (b2, A2) in combinations(images, 2):
        d = (b1 ^ b2).bit_count()
        if best is None or d < best:
            best, arg = d, (A1, A2)
    return best, arg

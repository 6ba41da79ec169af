"""Graphs as adjacency bit-rows, vertex subsets, and the parity primitives.

Vertices are labelled ``0 .. n-1``.  Row ``v`` of a graph is a Python ``int``
whose bit ``u`` is set iff ``uv`` is an edge, so neighbourhood algebra is plain
integer XOR/AND.  A ``uint64`` word matrix view is derived lazily for the
compiled search kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Tuple, Union

import numpy as np

WORD_BITS = 64


class GraphError(ValueError):
    """Invalid graph or vertex-set input."""


class Graph6Error(GraphError):
    """Malformed graph6 text; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``range(n)`` stored as a bitmask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise GraphError(f"vertex set {self.bits:#x} has bits outside range({self.n})")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in vertices:
            v = int(v)
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range for n={n}")
            bits |= 1 << v
        return cls(n, bits)

    @property
    def size(self) -> int:
        return _popcount(self.bits)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "VertexSet") -> None:
        if other.n != self.n:
            raise GraphError(f"vertex sets over different n ({self.n} vs {other.n})")

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits ^ other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits & other.bits)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits | other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits & ~other.bits)

    def members(self) -> Tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, {{{', '.join(map(str, self))}}})"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; immutable once built."""

    n: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.rows) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise GraphError(f"row {v} has bits outside range({self.n})")
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric for pair ({v}, {u})")
                r ^= low

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(self.n, (1 << self.n) - 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.rows[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.rows[u] >> v & 1]

    @property
    def num_edges(self) -> int:
        return sum(_popcount(r) for r in self.rows) // 2

    @cached_property
    def words(self) -> np.ndarray:
        """Rows as a C-contiguous ``(n, W)`` uint64 matrix, ``W = ceil(n/64)``."""
        width = max(1, -(-self.n // WORD_BITS))
        out = np.zeros((self.n, width), dtype=np.uint64)
        mask = (1 << WORD_BITS) - 1
        for v, row in enumerate(self.rows):
            for w in range(width):
                out[v, w] = (row >> (WORD_BITS * w)) & mask
        return out

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabelling must be a permutation of range(n)")
        return from_edge_list(self.n, [(perm[u], perm[v]) for u, v in self.edges()])


VertexLike = Union[VertexSet, Iterable[int]]


def as_vertex_set(G: Graph, A: VertexLike) -> VertexSet:
    if isinstance(A, VertexSet):
        if A.n != G.n:
            raise GraphError(f"vertex set over n={A.n} used with graph on n={G.n}")
        return A
    return VertexSet.of(G.n, A)


# --- construction ---------------------------------------------------------


def from_edge_list(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    if n < 1:
        raise GraphError("a graph needs at least one vertex")
    rows = [0] * n
    for pair in edges:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside range({n})")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def from_adjacency_matrix(M) -> Graph:
    M = np.asarray(M, dtype=bool)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise GraphError("adjacency matrix must be square")
    if M.diagonal().any():
        raise GraphError("adjacency matrix has a self-loop")
    if not np.array_equal(M, M.T):
        raise GraphError("adjacency matrix is not symmetric")
    n = M.shape[0]
    packed = np.packbits(M, axis=1, bitorder="little")
    return Graph(n, tuple(int.from_bytes(packed[v].tobytes(), "little") for v in range(n)))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return from_edge_list(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(v, v + 1) for v in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return from_edge_list(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph G(n, p).

    The pairs ``(u, v)``, ``u < v``, are taken in row-major order and pair
    number ``k`` receives the ``k``-th double of a Philox-4x64 stream keyed by
    ``seed``; the edge is present iff that uniform is ``< p``.  The stream
    depends only on ``(seed, n)``, so graphs are reproducible across machines.
    """
    if n < 1:
        raise GraphError("n must be positive")
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise GraphError(f"edge probability {p} outside [0, 1]")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & ((1 << 64) - 1)))
    iu, ju = np.triu_indices(n, k=1)
    present = rng.random(iu.size) < p
    M = np.zeros((n, n), dtype=bool)
    M[iu[present], ju[present]] = True
    M |= M.T
    return from_adjacency_matrix(M)


# --- parity primitives ----------------------------------------------------


def parity_vector(G: Graph, A: VertexLike) -> int:
    """XOR of the adjacency rows of ``A``: the vertices with odd degree into ``A``."""
    A = as_vertex_set(G, A)
    s = 0
    for v in A:
        s ^= G.rows[v]
    return s


def b_set(G: Graph, A: VertexLike) -> VertexSet:
    """Vertices outside ``A`` having an odd number of neighbours in ``A``."""
    A = as_vertex_set(G, A)
    if not A:
        raise GraphError("A must be nonempty")
    return VertexSet(G.n, parity_vector(G, A) & ~A.bits)


def degree(G: Graph, v: int) -> int:
    if not 0 <= v < G.n:
        raise GraphError(f"vertex {v} out of range")
    return _popcount(G.rows[v])


def min_degree(G: Graph) -> int:
    return min(_popcount(r) for r in G.rows)


def pair_symmetric_difference(G: Graph, x: int, y: int) -> VertexSet:
    """``(N(x) ^ N(y)) - {x, y}``, which is exactly ``b_set(G, {x, y})``."""
    if x == y:
        raise GraphError("pair needs two distinct vertices")
    for v in (x, y):
        if not 0 <= v < G.n:
            raise GraphError(f"vertex {v} out of range")
    return VertexSet(G.n, (G.rows[x] ^ G.rows[y]) & ~((1 << x) | (1 << y)))


# --- graph6 ---------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    return "~~" + "".join(chr(63 + ((n >> s) & 63)) for s in (30, 24, 18, 12, 6, 0))


def serialize_graph6(G: Graph) -> str:
    bits = []
    for j in range(1, G.n):
        row = G.rows[j]
        bits.extend(row >> i & 1 for i in range(j))
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(map(str, bits[k : k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _encode_n(G.n) + body


def parse_graph6(text: str) -> Graph:
    data = text.strip()
    base = 0
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER) :]
        base = len(_G6_HEADER)
    if not data:
        raise Graph6Error("empty graph6 string", base)
    for k, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range", base + k)
    vals = [ord(ch) - 63 for ch in data]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise Graph6Error("truncated 8-byte vertex count", base + len(vals))
        n, pos = 0, 8
        for v in vals[2:8]:
            n = (n << 6) | v
    else:
        if len(vals) < 4:
            raise Graph6Error("truncated 4-byte vertex count", base + len(vals))
        n, pos = 0, 4
        for v in vals[1:4]:
            n = (n << 6) | v
    if n < 1:
        raise Graph6Error("graph6 vertex count must be positive", base)
    need = -(-(n * (n - 1) // 2) // 6)
    have = len(vals) - pos
    if have < need:
        raise Graph6Error(f"truncated payload: need {need} bytes, have {have}", base + len(vals))
    if have > need:
        raise Graph6Error("trailing bytes after payload", base + pos + need)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if vals[pos + k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


# --- edge-list text -------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty edge-list input")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphError(f"bad edge-list header {lines[0]!r}; expected 'n m'") from None
    if len(lines) - 1 != m:
        raise GraphError(f"header announces {m} edges but {len(lines) - 1} edge lines follow")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return from_edge_list(n, edges)


def serialize_edge_list(G: Graph) -> str:
    edges = G.edges()
    return "\n".join([f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


GRAPH6_SUFFIXES = {".g6", ".graph6"}


def infer_format(path: Union[str, Path]) -> str:
    return "graph6" if Path(path).suffix.lower() in GRAPH6_SUFFIXES else "edges"


def load_graph(path: Union[str, Path], fmt: str = None) -> Graph:
    fmt = fmt or infer_format(path)
    text = Path(path).read_text()
    if fmt == "graph6":
        first = next((ln for ln in text.splitlines() if ln.strip()), "")
        return parse_graph6(first)
    if fmt == "edges":
        return parse_edge_list(text)
    raise GraphError(f"unknown graph format {fmt!r}")


def save_graph(G: Graph, path: Union[str, Path], fmt: str = None) -> None:
    fmt = fmt or infer_format(path)
    text = serialize_graph6(G) + "\n" if fmt == "graph6" else serialize_edge_list(G)
    Path(path).write_text(text)

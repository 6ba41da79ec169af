"""The +/-1 sign game behind the diagonal distance.

Every operation is an XOR mask on the sign vector (bit set means sign -1):

    O1 -> N(v)          flip the neighbours
    O2 -> {v}           flip itself
    O3 -> N(v) + {v}    flip both

so a plan's effect is the XOR of its masks and never depends on order.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .graph_core import Graph, GraphError, VertexLike, VertexSet, as_vertex_set, b_set

MAX_EXHAUSTIVE_N = 12


class Op(enum.IntEnum):
    NONE = 0
    O1 = 1
    O2 = 2
    O3 = 3


@dataclass(frozen=True)
class SignState:
    n: int
    signs: int = 0

    @property
    def all_plus(self) -> bool:
        return self.signs == 0

    def sign(self, v: int) -> int:
        return -1 if self.signs >> v & 1 else 1


@dataclass(frozen=True)
class OperationPlan:
    ops: Tuple[Op, ...]

    def __post_init__(self):
        if not any(self.ops):
            raise GraphError("a plan must perform at least one operation")

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def count(self) -> int:
        return sum(1 for op in self.ops if op)

    def vertices_doing(self, op: Op) -> Tuple[int, ...]:
        return tuple(v for v, o in enumerate(self.ops) if o == op)


@dataclass(frozen=True)
class Witness:
    """A nonempty set ``A`` with its derived set ``B(A)``."""

    A: VertexSet
    B: VertexSet
    cost: int

    def __post_init__(self):
        if not self.A:
            raise GraphError("witness set A must be nonempty")
        if self.A.bits & self.B.bits:
            raise GraphError("witness sets A and B must be disjoint")
        if self.cost != self.A.size + self.B.size:
            raise GraphError(f"witness cost {self.cost} != |A| + |B| = {self.A.size + self.B.size}")

    @classmethod
    def build(cls, G: Graph, A: VertexLike) -> "Witness":
        A = as_vertex_set(G, A)
        B = b_set(G, A)
        return cls(A, B, A.size + B.size)

    def is_valid_for(self, G: Graph) -> bool:
        return self.A.n == G.n and b_set(G, self.A) == self.B

    def format_line(self) -> str:
        a = "".join(f" {v}" for v in self.A)
        b = "".join(f" {v}" for v in self.B)
        return f"A:{a} | B:{b} | cost: {self.cost}"


_LINE = re.compile(r"^\s*A:(?P<a>[\d\s]*)\|\s*B:(?P<b>[\d\s]*)\|\s*cost:\s*(?P<c>\d+)\s*$")


def parse_witness_line(G: Graph, line: str) -> Witness:
    """Inverse of :meth:`Witness.format_line`; ``B`` and cost are re-checked against ``G``."""
    m = _LINE.match(line)
    if not m:
        raise GraphError(f"not a witness line: {line!r}")
    w = Witness(
        VertexSet.of(G.n, map(int, m["a"].split())),
        VertexSet.of(G.n, map(int, m["b"].split())),
        int(m["c"]),
    )
    if not w.is_valid_for(G):
        raise GraphError("witness B does not match B(A) for this graph")
    return w


def op_mask(G: Graph, v: int, op: Op) -> int:
    if op == Op.O1:
        return G.rows[v]
    if op == Op.O2:
        return 1 << v
    if op == Op.O3:
        return G.rows[v] | 1 << v
    return 0


def apply_plan(G: Graph, plan: OperationPlan, order: Optional[Sequence[int]] = None) -> SignState:
    """Run ``plan`` from the all-+1 state, visiting vertices in ``order``."""
    if plan.n != G.n:
        raise GraphError(f"plan covers {plan.n} vertices, graph has {G.n}")
    signs = 0
    for v in order if order is not None else range(G.n):
        signs ^= op_mask(G, v, plan.ops[v])
    return SignState(G.n, signs)


def compile_witness(G: Graph, A: VertexLike) -> OperationPlan:
    A = as_vertex_set(G, A)
    B = b_set(G, A)
    ops = [Op.NONE] * G.n
    for v in A:
        odd = (G.rows[v] & A.bits).bit_count() & 1
        ops[v] = Op.O3 if odd else Op.O1
    for v in B:
        ops[v] = Op.O2
    return OperationPlan(tuple(ops))


def verify_witness(G: Graph, A: VertexLike) -> Tuple[bool, int]:
    """Play the compiled plan for ``A``; return (back to all +1, operation count)."""
    plan = compile_witness(G, A)
    return apply_plan(G, plan).all_plus, plan.count


def min_operation_count(G: Graph) -> Tuple[int, OperationPlan]:
    """Fewest operations of any nonzero plan that returns to all +1.

    Searches every assignment in ``{None, O1, O2, O3}^n`` by increasing number
    of active vertices; independent of the set restatement used elsewhere.
    """
    if G.n > MAX_EXHAUSTIVE_N:
        raise GraphError(f"exhaustive plan search is capped at n <= {MAX_EXHAUSTIVE_N}")
    masks = [[op_mask(G, v, op) for op in (Op.O1, Op.O2, Op.O3)] for v in range(G.n)]
    for k in range(1, G.n + 1):
        for verts in itertools.combinations(range(G.n), k):
            for choice in itertools.product(range(3), repeat=k):
                acc = 0
                for v, c in zip(verts, choice):
                    acc ^= masks[v][c]
                if acc == 0:
                    ops = [Op.NONE] * G.n
                    for v, c in zip(verts, choice):
                        ops[v] = Op(c + 1)
                    return k, OperationPlan(tuple(ops))
    raise AssertionError("unreachable: O1 at a vertex plus O2 on its neighbours always works")


def all_nonempty_subsets(n: int) -> Iterable[VertexSet]:
    return (VertexSet(n, bits) for bits in range(1, 1 << n))

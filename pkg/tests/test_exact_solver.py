import math
import random

import pytest

from diagdist.exact_solver import (
    SOURCE_PAIR,
    diagonal_distance,
    layer_order,
    naive_diagonal_distance,
    revolving_door,
    upper_bound_mindeg,
    upper_bound_pairs,
)
from diagdist.flip_game import verify_witness
from diagdist.graph_core import (
    GraphError,
    complete_graph,
    cycle_graph,
    empty_graph,
    from_edge_list,
    gnp,
    min_degree,
    parse_graph6,
    path_graph,
    star_graph,
)

from .conftest import random_graph


def brute_f(G):
    """All nonempty subsets, cost counted straight from the definition."""
    best = None
    for bits in range(1, 1 << G.n):
        A = [v for v in range(G.n) if bits >> v & 1]
        B = [x for x in range(G.n) if not bits >> x & 1 and sum(G.has_edge(x, v) for v in A) % 2]
        c = len(A) + len(B)
        best = c if best is None else min(best, c)
    return best


class TestBounds:
    def test_mindeg(self):
        assert upper_bound_mindeg(from_edge_list(3, [(0, 1)]))[0] == 1
        assert upper_bound_mindeg(cycle_graph(4))[0] == 3
        assert upper_bound_mindeg(complete_graph(5))[0] == 5

    def test_mindeg_witness(self):
        bound, w = upper_bound_mindeg(star_graph(4))
        assert bound == 2 and w.A.size == 1 and w.B.members() == (0,)

    def test_pairs(self):
        for n in range(2, 8):
            assert upper_bound_pairs(complete_graph(n))[0] == 2
        assert upper_bound_pairs(cycle_graph(4))[0] == 2
        bound, w = upper_bound_pairs(path_graph(3))
        assert bound == 2 and w.A.members() == (0, 2)

    def test_pairs_needs_two(self):
        with pytest.raises(GraphError):
            upper_bound_pairs(empty_graph(1))


class TestSmallGraphs:
    @pytest.mark.parametrize(
        "G, f",
        [
            (from_edge_list(3, [(0, 1)]), 1),
            (cycle_graph(4), 2),
            (complete_graph(3), 2),
            (complete_graph(2), 2),
            (star_graph(3), 2),
            (path_graph(3), 2),
            (empty_graph(5), 1),
            (complete_graph(4), 2),
            (empty_graph(1), 1),
        ],
    )
    def test_known_values(self, G, f):
        assert brute_f(G) == f
        assert diagonal_distance(G).f == f
        assert naive_diagonal_distance(G).f == f

    def test_single_vertex_uses_o1(self):
        res = diagonal_distance(empty_graph(1))
        assert res.witness.A.members() == (0,) and res.f == 1

    def test_naive_guard(self):
        with pytest.raises(GraphError):
            naive_diagonal_distance(empty_graph(23))


def test_matches_naive_on_random_graphs(rng):
    for _ in range(200):
        n = rng.randint(1, 12)
        G = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]))
        res = diagonal_distance(G)
        assert res.f == naive_diagonal_distance(G).f
        assert res.proven_optimal
        assert verify_witness(G, res.witness.A) == (True, res.f)
        assert res.f <= min_degree(G) + 1
        if n >= 2:
            assert res.f <= upper_bound_pairs(G)[0]


def test_naive_oracle_matches_definition(rng):
    for _ in range(30):
        G = random_graph(rng, rng.randint(1, 8), rng.random())
        assert naive_diagonal_distance(G).f == brute_f(G)


def test_multiword_kernel_path():
    # f of a disjoint union is the min over components. The 8-vertex piece has
    # f = 3 below both of its bounds, and sits on vertices 62..69 so the
    # search must find it across the 64-bit word boundary.
    H = parse_graph6("G]|Z`K")
    assert brute_f(H) == 3 and upper_bound_mindeg(H)[0] == 4 and upper_bound_pairs(H)[0] == 4
    big = gnp(62, 0.5, 1)
    G = from_edge_list(70, big.edges() + [(u + 62, v + 62) for u, v in H.edges()])
    res = diagonal_distance(G)
    assert res.f == 3 and res.bound_source == "search"
    assert all(v >= 62 for v in res.witness.A)
    assert verify_witness(G, res.witness.A) == (True, 3)
    cut = diagonal_distance(gnp(70, 0.5, 3), budget=10**6)
    assert not cut.proven_optimal


def test_revolving_door_order():
    for n in range(1, 11):
        for t in range(1, n + 1):
            order = revolving_door(n, t)
            assert len(order) == math.comb(n, t) == len(set(order))
            assert all(bin(m).count("1") == t for m in order)
            assert all(bin(u ^ v).count("1") == 2 for u, v in zip(order, order[1:]))


def test_layer_visits_every_subset_once():
    for n in range(1, 12):
        for a in range(1, n + 1):
            order = layer_order(n, a)
            assert len(order) == math.comb(n, a) == len(set(order))


def test_node_counter_matches_layer_sizes(rng):
    for _ in range(40):
        n = rng.randint(2, 16)
        G = random_graph(rng, n, 0.5)
        res = diagonal_distance(G)
        for a, nodes, best_before in res.layer_nodes:
            assert nodes == math.comb(n, a)
        assert res.nodes_explored == sum(x[1] for x in res.layer_nodes)


def test_pruning_never_reaches_current_best(rng):
    for _ in range(60):
        n = rng.randint(2, 18)
        G = random_graph(rng, n, rng.random())
        res = diagonal_distance(G)
        layers = [x[0] for x in res.layer_nodes]
        assert layers == list(range(1, len(layers) + 1))
        for a, _, best_before in res.layer_nodes:
            assert a < best_before
        assert len(layers) + 1 >= res.f or len(layers) == n


def test_tie_break_is_first_in_enumeration_order(rng):
    for _ in range(40):
        n = rng.randint(3, 10)
        G = random_graph(rng, n, 0.5)
        res = diagonal_distance(G)
        if res.bound_source != "search":
            continue
        a = res.witness.A.size
        first = next(m for m in layer_order(n, a) if verify_witness(G, [v for v in range(n) if m >> v & 1])[1] == res.f)
        assert res.witness.A.bits == first


def test_isomorphism_invariance(rng):
    for _ in range(50):
        n = rng.randint(2, 14)
        G = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]))
        perm = list(range(n))
        rng.shuffle(perm)
        assert diagonal_distance(G.relabel(perm)).f == diagonal_distance(G).f


def test_threads_do_not_change_results(rng):
    for _ in range(20):
        G = random_graph(rng, rng.randint(5, 22), 0.5)
        assert diagonal_distance(G, threads=1) == diagonal_distance(G, threads=2)


def test_budget_flags_upper_bound():
    G = gnp(40, 0.5, 11)
    full = diagonal_distance(G)
    cut = diagonal_distance(G, budget=1000)
    assert full.proven_optimal and not cut.proven_optimal
    assert cut.nodes_explored == 1000
    assert cut.f >= full.f
    assert verify_witness(G, cut.witness.A) == (True, cut.f)


def test_bound_source_pair_when_pair_is_tight():
    res = diagonal_distance(complete_graph(6))
    assert res.f == 2 and res.bound_source == SOURCE_PAIR

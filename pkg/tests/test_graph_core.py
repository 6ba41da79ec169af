import itertools
import math
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from diagdist.graph_core import (
    Graph,
    Graph6Error,
    GraphError,
    VertexSet,
    b_set,
    complete_graph,
    cycle_graph,
    degree,
    empty_graph,
    from_edge_list,
    gnp,
    load_graph,
    min_degree,
    pair_symmetric_difference,
    parse_edge_list,
    parse_graph6,
    path_graph,
    save_graph,
    serialize_edge_list,
    serialize_graph6,
    star_graph,
)

from .conftest import graphs, random_graph


def brute_b_set(G, A):
    """Definition: vertices outside A with an odd number of neighbours in A."""
    return {x for x in range(G.n) if x not in A and sum(G.has_edge(x, v) for v in A) % 2 == 1}


def nx_graph6(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return nx.to_graph6_bytes(H, header=False).decode().strip()


class TestConstruction:
    def test_single_edge(self):
        G = from_edge_list(2, [(0, 1)])
        assert G.rows == (0b10, 0b01)

    def test_edgeless(self):
        G = from_edge_list(3, [])
        assert G.rows == (0, 0, 0)

    def test_cycle(self):
        G = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert [degree(G, v) for v in range(4)] == [2, 2, 2, 2]

    def test_duplicates_collapse(self):
        G = from_edge_list(3, [(0, 1), (1, 0), (0, 1)])
        assert G.num_edges == 1

    @pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)], [(1, 1)]])
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(GraphError):
            from_edge_list(3, edges)

    def test_rejects_asymmetric_rows(self):
        with pytest.raises(GraphError):
            Graph(2, (0b10, 0))

    def test_rejects_high_bits(self):
        with pytest.raises(GraphError):
            Graph(2, (0b110, 0b001))

    def test_words_view_multiword(self):
        G = from_edge_list(70, [(0, 69), (63, 64)])
        w = G.words
        assert w.shape == (70, 2)
        assert w[0, 1] == np.uint64(1 << 5)
        assert w[63, 1] == 1 and w[64, 0] == np.uint64(1 << 63)


class TestGraph6:
    def test_k2(self):
        G = parse_graph6("A_")
        assert G.n == 2 and G.edges() == [(0, 1)]

    def test_edgeless_five(self):
        G = parse_graph6("D??")
        assert G.n == 5 and G.num_edges == 0

    def test_serialize_matches_independent_encoder(self, rng):
        for _ in range(200):
            n = rng.randint(1, 30)
            G = random_graph(rng, n, rng.random())
            assert serialize_graph6(G) == nx_graph6(G)

    def test_round_trip_1000(self, rng):
        for _ in range(1000):
            n = rng.randint(1, 30)
            G = random_graph(rng, n, rng.random())
            assert parse_graph6(serialize_graph6(G)) == G

    def test_canonical_text_round_trip(self):
        for s in ["A_", "D??", "Bw", "DQc", "Etv_"]:
            assert serialize_graph6(parse_graph6(s)) == s

    def test_large_n_header(self):
        G = from_edge_list(100, [(0, 99), (5, 6)])
        s = serialize_graph6(G)
        assert s[0] == "~"
        assert s == nx_graph6(G)
        assert parse_graph6(s) == G

    def test_header_is_tolerated(self):
        assert parse_graph6(">>graph6<<A_") == complete_graph(2)

    def test_truncated_payload_reports_offset(self):
        with pytest.raises(Graph6Error) as err:
            parse_graph6("D?")
        assert err.value.offset == 2

    def test_bad_character_offset(self):
        with pytest.raises(Graph6Error) as err:
            parse_graph6("D? ?")
        assert err.value.offset == 2

    def test_empty(self):
        with pytest.raises(Graph6Error):
            parse_graph6("")


class TestEdgeListFormat:
    def test_round_trip(self, rng):
        for _ in range(50):
            G = random_graph(rng, rng.randint(1, 15), 0.4)
            assert parse_edge_list(serialize_edge_list(G)) == G

    def test_count_mismatch(self):
        with pytest.raises(GraphError):
            parse_edge_list("3 2\n0 1\n")

    def test_file_io_by_extension(self, tmp_path):
        G = cycle_graph(5)
        for name in ("c5.g6", "c5.edges", "c5.txt"):
            save_graph(G, tmp_path / name)
            assert load_graph(tmp_path / name) == G
        assert (tmp_path / "c5.g6").read_text().strip() == serialize_graph6(G)


class TestGnp:
    def test_p_zero_and_one(self):
        for s in (0, 1, 99):
            assert gnp(10, 0.0, s) == empty_graph(10)
            assert gnp(10, 1.0, s) == complete_graph(10)

    def test_deterministic(self):
        assert gnp(25, 0.3, 7) == gnp(25, 0.3, 7)
        assert gnp(25, 0.3, 7) != gnp(25, 0.3, 8)

    def test_mean_edge_count(self):
        counts = [gnp(30, 0.5, s).num_edges for s in range(1000)]
        se = math.sqrt(435 * 0.25 / 1000)
        assert abs(np.mean(counts) - 217.5) <= 3 * se

    @pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
    def test_bad_p(self, p):
        with pytest.raises(GraphError):
            gnp(5, p, 0)


class TestParity:
    def test_c4_opposite(self):
        G = cycle_graph(4)
        assert b_set(G, [0, 2]).size == 0

    def test_k2_single(self):
        assert b_set(complete_graph(2), [0]).members() == (1,)

    def test_whole_vertex_set(self):
        G = cycle_graph(6)
        assert not b_set(G, range(6))

    def test_empty_a_rejected(self):
        with pytest.raises(GraphError):
            b_set(cycle_graph(4), [])

    def test_matches_definition(self, rng):
        for _ in range(300):
            n = rng.randint(1, 12)
            G = random_graph(rng, n, rng.random())
            A = {v for v in range(n) if rng.random() < 0.4} or {0}
            assert set(b_set(G, A)) == brute_b_set(G, A)

    @given(graphs(max_n=12))
    @settings(max_examples=100, deadline=None)
    def test_disjoint_from_a(self, G):
        A = VertexSet(G.n, (1 << G.n) - 1 & 0x5555)
        if A:
            assert not (b_set(G, A).bits & A.bits)

    def test_pair_difference_equals_b_set_exhaustive(self, rng):
        for _ in range(40):
            n = rng.randint(2, 8)
            G = random_graph(rng, n, rng.random())
            for x, y in itertools.combinations(range(n), 2):
                assert pair_symmetric_difference(G, x, y) == b_set(G, [x, y])

    def test_pair_examples(self):
        assert not pair_symmetric_difference(cycle_graph(4), 0, 2)
        assert not pair_symmetric_difference(complete_graph(6), 1, 4)
        P = path_graph(3)
        assert not pair_symmetric_difference(P, 0, 2)
        assert pair_symmetric_difference(P, 0, 1).members() == (2,)
        with pytest.raises(GraphError):
            pair_symmetric_difference(P, 1, 1)

    def test_degrees(self):
        assert min_degree(cycle_graph(4)) == 2
        assert min_degree(empty_graph(3)) == 0
        assert min_degree(star_graph(3)) == 1

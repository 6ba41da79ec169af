import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from diagdist.exact_solver import diagonal_distance
from diagdist.flip_game import (
    Op,
    OperationPlan,
    Witness,
    all_nonempty_subsets,
    apply_plan,
    compile_witness,
    min_operation_count,
    parse_witness_line,
    verify_witness,
)
from diagdist.graph_core import GraphError, b_set, complete_graph, cycle_graph, empty_graph, star_graph

from .conftest import graphs, random_graph


def test_k2_both_o3_returns_to_plus():
    G = complete_graph(2)
    assert apply_plan(G, OperationPlan((Op.O3, Op.O3))).all_plus


def test_isolated_vertex_o1_is_noop():
    assert apply_plan(empty_graph(1), OperationPlan((Op.O1,))).all_plus


def test_k2_o1_then_o2():
    assert apply_plan(complete_graph(2), OperationPlan((Op.O1, Op.O2))).all_plus


def test_single_o2_leaves_a_minus():
    state = apply_plan(complete_graph(3), OperationPlan((Op.O2, Op.NONE, Op.NONE)))
    assert not state.all_plus and state.sign(0) == -1 and state.sign(1) == 1


def test_empty_plan_rejected():
    with pytest.raises(GraphError):
        OperationPlan((Op.NONE, Op.NONE))


def test_compile_examples():
    assert compile_witness(complete_graph(2), [0, 1]).ops == (Op.O3, Op.O3)
    assert compile_witness(complete_graph(2), [0]).ops == (Op.O1, Op.O2)
    plan = compile_witness(cycle_graph(4), [0, 2])
    assert plan.ops == (Op.O1, Op.NONE, Op.O1, Op.NONE)
    assert plan.vertices_doing(Op.O2) == ()


def test_compile_rejects_empty():
    with pytest.raises(GraphError):
        compile_witness(cycle_graph(4), [])


def test_verify_examples():
    assert verify_witness(cycle_graph(4), [0, 2]) == (True, 2)
    assert verify_witness(star_graph(3), [1]) == (True, 2)


def test_verify_exhaustive_up_to_ten(rng):
    for n in range(1, 11):
        G = random_graph(rng, n, rng.random())
        for A in all_nonempty_subsets(n):
            ok, cost = verify_witness(G, A)
            assert ok
            assert cost == A.size + b_set(G, A).size


@given(graphs(max_n=9), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_order_independence(G, r):
    A = [v for v in range(G.n) if r.random() < 0.5] or [0]
    plan = compile_witness(G, A)
    order = list(range(G.n))
    r.shuffle(order)
    assert apply_plan(G, plan, order) == apply_plan(G, plan)


def test_random_plans_are_order_independent(rng):
    for _ in range(200):
        n = rng.randint(1, 9)
        G = random_graph(rng, n, 0.5)
        ops = [Op(rng.randint(0, 3)) for _ in range(n)]
        ops[rng.randrange(n)] = Op.O2
        plan = OperationPlan(tuple(ops))
        order = list(range(n))
        rng.shuffle(order)
        assert apply_plan(G, plan, order) == apply_plan(G, plan)


def test_min_plan_equals_f_small(rng):
    for _ in range(60):
        n = rng.randint(1, 5)
        G = random_graph(rng, n, rng.random())
        count, plan = min_operation_count(G)
        assert apply_plan(G, plan).all_plus
        assert count == diagonal_distance(G).f


def test_exhaustive_plan_cap():
    with pytest.raises(GraphError):
        min_operation_count(empty_graph(13))


def test_witness_line_round_trip():
    G = star_graph(3)
    w = Witness.build(G, [1])
    line = w.format_line()
    assert line == "A: 1 | B: 0 | cost: 2"
    assert parse_witness_line(G, line) == w


def test_witness_line_rejects_wrong_b():
    with pytest.raises(GraphError):
        parse_witness_line(star_graph(3), "A: 1 | B: 2 | cost: 2")


def test_witness_invariants():
    G = cycle_graph(5)
    with pytest.raises(GraphError):
        Witness(b_set(G, [0]), b_set(G, [0]), 2)

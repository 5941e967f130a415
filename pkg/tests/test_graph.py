import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from voterdisc import graph
from voterdisc.graph import (
    GraphError, RegularGraph, Subgraph, ball, distance, generate_regular, is_connected,
    is_ltl_vertex, is_ltle_edge, load_graph, save_graph, tree_excess,
)
from voterdisc.oracles import floyd_warshall


def test_k4_is_unique_cubic_graph_on_four_vertices(k4):
    for seed in range(5):
        assert generate_regular(4, 3, seed) == k4


@pytest.mark.parametrize("n,d", [(5, 3), (3, 3), (4, 4), (10, 2)])
def test_bad_parameters(n, d):
    with pytest.raises(GraphError):
        generate_regular(n, d, 0)


def test_attempt_cap_reports_failure():
    with pytest.raises(graph.GenerationFailed):
        generate_regular(12, 9, 0, max_attempts=1)


@pytest.mark.parametrize("n,d,seed", [(1000, 3, 1), (200, 4, 7), (51 * 2, 5, 3)])
def test_generated_graph_is_simple_regular(n, d, seed):
    g = generate_regular(n, d, seed)
    assert g.degree_histogram() == {d: n}
    assert g.m == n * d // 2
    assert np.all(g.adjacency != np.arange(n)[:, None])
    for v in range(n):
        assert len(set(g.adjacency[v].tolist())) == d
        for k, w in enumerate(g.adjacency[v]):
            assert v in g.adjacency[w]
            e = g.incidence[v, k]
            assert sorted(g.edges[e].tolist()) == sorted([v, int(w)])
    # each edge appears twice across adjacency lists
    assert np.bincount(g.incidence.ravel(), minlength=g.m).tolist() == [2] * g.m


def test_generation_is_deterministic():
    a, b = generate_regular(300, 3, 42), generate_regular(300, 3, 42)
    assert a.edges.tobytes() == b.edges.tobytes()
    assert generate_regular(300, 3, 43) != a


def test_rrg_connected_with_1500_edges(rrg1000):
    assert rrg1000.m == 1500
    assert is_connected(rrg1000)


def test_two_disjoint_k4_not_connected(k4):
    e = [(a, b) for a, b in k4.edges.tolist()] + [(a + 4, b + 4) for a, b in k4.edges.tolist()]
    g = RegularGraph.from_edges(8, e)
    assert not is_connected(g)
    assert distance(g, 0, 5) is None
    assert is_connected(k4)


def test_distance_small_cases(k4):
    assert distance(k4, 0, 0) == 0
    assert distance(k4, 0, 3) == 1


@pytest.mark.parametrize("n,d,seed", [(50, 3, s) for s in range(5)] + [(20, 4, 1), (6, 3, 0), (10, 3, 2)])
def test_distance_matches_floyd_warshall(n, d, seed):
    g = generate_regular(n, d, seed)
    D = floyd_warshall(g)
    for x in range(n):
        dist = graph.bfs_distances(g, x)
        for y in range(n):
            expect = None if np.isinf(D[x, y]) else int(D[x, y])
            assert dist.get(y) == expect


def test_petersen_antipodal_distance(petersen):
    # girth 5, diameter 2: 0 and 7 are non-adjacent
    assert distance(petersen, 0, 7) == floyd_warshall(petersen)[0, 7] == 2


def test_tree_excess_basic():
    path = Subgraph(frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)}))
    cycle = Subgraph(frozenset(range(5)), frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}))
    assert tree_excess(path) == 0
    assert tree_excess(cycle) == 1


def test_subgraph_rejects_dangling_edge():
    with pytest.raises(GraphError):
        Subgraph(frozenset({0, 1}), frozenset({(0, 2)}))


def _excess_oracle(sub):
    # independent count: components by repeated DFS over an adjacency dict
    adj = {v: set() for v in sub.vertices}
    for a, b in sub.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), 0
    for v in adj:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
    return len(sub.edges) - len(sub.vertices) + comps


def test_ball_tree_excess_matches_oracle(rrg1000):
    for x in range(0, 1000, 37):
        b = ball(rrg1000, x, 2)
        assert tree_excess(b) == _excess_oracle(b)
    # connected balls: |E| - |V| + 1
    b = ball(rrg1000, 5, 3)
    assert tree_excess(b) == len(b.edges) - len(b.vertices) + 1


def test_ltl_ltle_on_k4(k4):
    assert not any(is_ltl_vertex(k4, x, 1) for x in range(4))
    assert not any(is_ltle_edge(k4, e, 1) for e in range(6))


def test_large_girth_balls_are_trees(petersen):
    # girth 5 > 2*1 + 1 and > 2*1 + 2
    assert all(is_ltl_vertex(petersen, x, 1) for x in range(10))
    assert all(is_ltle_edge(petersen, e, 1) for e in range(petersen.m))
    # radius 2 covers the whole graph, which has cycles
    assert not is_ltl_vertex(petersen, 0, 2)


def test_ltle_accepts_endpoint_pair(petersen):
    assert is_ltle_edge(petersen, (0, 1), 1)
    with pytest.raises(GraphError):
        is_ltle_edge(petersen, (0, 2), 1)


def test_ltl_fraction_and_ltle_count(rrg1000):
    r = graph.default_radius(1000, 3)
    assert r == 1
    frac = np.mean([is_ltl_vertex(rrg1000, x, r) for x in range(1000)])
    assert frac >= 0.9
    assert len(graph.ltle_edges(rrg1000, r)) >= rrg1000.m - 0.05 * 1000


def test_ltle_implies_ltl_at_smaller_radius():
    g = generate_regular(400, 3, 5)
    for e in range(0, g.m, 3):
        if is_ltle_edge(g, e, 2):
            x, y = g.edges[e]
            assert is_ltl_vertex(g, int(x), 1) and is_ltl_vertex(g, int(y), 1)


def test_save_load_round_trip(k4):
    buf = io.StringIO()
    save_graph(k4, buf)
    assert buf.getvalue().splitlines()[0] == "4 3"
    assert load_graph(io.StringIO(buf.getvalue())) == k4


def test_save_load_file(tmp_path, rrg1000):
    p = tmp_path / "g.txt"
    save_graph(rrg1000, p)
    text = p.read_text()
    assert text.endswith("\n") and len(text.splitlines()) == 1 + 1500
    assert load_graph(p) == rrg1000


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**63 - 1), st.sampled_from([(20, 3), (30, 4), (16, 5)]))
def test_round_trip_preserves_edges(seed, nd):
    g = generate_regular(*nd, seed)
    buf = io.StringIO()
    save_graph(g, buf)
    h = load_graph(io.StringIO(buf.getvalue()))
    assert h.m == g.m and h == g


@pytest.mark.parametrize("text,msg", [
    ("4 3\n0 1\n0 2\n0 3\n1 2\n1 3\n", "degree"),
    ("4 3\n0 1\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", "duplicate"),
    ("4\n0 1\n", "header"),
    ("x y\n", "header"),
    ("4 3\n0 1 2\n", "malformed"),
    ("4 3\n1 0\n", "u < v"),
])
def test_loader_rejects_malformed(text, msg):
    with pytest.raises(GraphError, match=msg):
        load_graph(io.StringIO(text))


def test_connectivity_over_seeds():
    connected = sum(is_connected(generate_regular(1000, 3, s)) for s in range(100))
    assert connected >= 99

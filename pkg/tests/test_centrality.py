import random
import time
from itertools import combinations

import pytest

from hsge.centrality import edge_betweenness, node_betweenness
from hsge.graph import AttributedGraph

from conftest import random_connected_graph
from naive_reference import naive_edge_betweenness, naive_node_betweenness


class TestEdgeBetweenness:
    def test_single_edge(self):
        g = AttributedGraph(2, [(0, 1)])
        assert edge_betweenness(g) == {(0, 1): 1.0}

    def test_path3(self, path3):
        # pairs: (0,1) uses edge01; (1,2) uses edge12; (0,2) uses both
        scores = edge_betweenness(path3)
        assert scores[(0, 1)] == pytest.approx(2.0)
        assert scores[(1, 2)] == pytest.approx(2.0)

    def test_triangle(self, triangle):
        scores = edge_betweenness(triangle)
        assert all(s == pytest.approx(1.0) for s in scores.values())

    def test_empty_edge_set(self):
        assert edge_betweenness(AttributedGraph(3, [])) == {}

    def test_bridge_dominates(self, two_triangles_bridge):
        scores = edge_betweenness(two_triangles_bridge)
        assert scores[(2, 3)] == pytest.approx(9.0)
        others = [s for e, s in scores.items() if e != (2, 3)]
        assert max(others) <= 4.0 + 1e-9


class TestNodeBetweenness:
    def test_complete_graph_zero(self):
        g = AttributedGraph(5, list(combinations(range(5), 2)))
        assert all(v == pytest.approx(0.0)
                   for v in node_betweenness(g).values())

    def test_star_center(self, star3):
        scores = node_betweenness(star3)
        assert scores[0] == pytest.approx(3.0)
        assert scores[1] == scores[2] == scores[3] == pytest.approx(0.0)

    def test_path3_interior(self, path3):
        scores = node_betweenness(path3)
        assert scores[1] == pytest.approx(1.0)
        assert scores[0] == scores[2] == pytest.approx(0.0)

    def test_single_node(self):
        assert node_betweenness(AttributedGraph(1, [])) == {0: 0.0}

    def test_equal_split_four_cycle(self, four_cycle):
        scores = node_betweenness(four_cycle)
        assert all(v == pytest.approx(0.5) for v in scores.values())


def all_labeled_connected_graphs(n):
    """Every connected graph on exactly n labeled nodes."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        g = AttributedGraph(n, edges)
        if g.is_connected():
            yield g


class TestOracleEquivalence:
    def test_exhaustive_up_to_five_nodes(self):
        for n in range(2, 6):
            for g in all_labeled_connected_graphs(n):
                fast_e = edge_betweenness(g)
                naive_e = naive_edge_betweenness(g)
                for e in g.edges:
                    assert fast_e[e] == pytest.approx(naive_e[e], abs=1e-9)
                fast_n = node_betweenness(g)
                naive_n = naive_node_betweenness(g)
                for u in range(n):
                    assert fast_n[u] == pytest.approx(naive_n[u], abs=1e-9)

    def test_random_medium_graphs(self):
        rng = random.Random(11)
        for _ in range(60):
            g = random_connected_graph(rng, rng.randrange(6, 9),
                                       extra_edges=rng.randrange(5))
            fast_e = edge_betweenness(g)
            naive_e = naive_edge_betweenness(g)
            for e in g.edges:
                assert fast_e[e] == pytest.approx(naive_e[e], abs=1e-9)
            fast_n = node_betweenness(g)
            naive_n = naive_node_betweenness(g)
            for u in range(g.num_nodes):
                assert fast_n[u] == pytest.approx(naive_n[u], abs=1e-9)

    def test_disconnected_components_independent(self):
        rng = random.Random(5)
        a = random_connected_graph(rng, 6, extra_edges=3)
        b = random_connected_graph(rng, 5, extra_edges=2)
        edges = list(a.edges) + [(u + 6, v + 6) for (u, v) in b.edges]
        combined = AttributedGraph(11, edges)
        scores = edge_betweenness(combined)
        for e, s in edge_betweenness(a).items():
            assert scores[e] == pytest.approx(s)
        for (u, v), s in edge_betweenness(b).items():
            assert scores[(u + 6, v + 6)] == pytest.approx(s)


def test_runtime_scales_smoothly():
    """Smoke check: doubling n and m must not blow past the n*m trend."""
    rng = random.Random(1)
    timings = []
    for n in (40, 80, 160):
        g = random_connected_graph(rng, n, extra_edges=n)
        start = time.perf_counter()
        edge_betweenness(g)
        timings.append(time.perf_counter() - start)
    assert timings[2] < 1.0  # absolute sanity on tiny graphs
    # n*m quadruples per step; allow a generous factor for noise
    assert timings[2] <= 60 * timings[0] + 0.05

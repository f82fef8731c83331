import random
from collections import Counter

import pytest

from hsge.errors import ParameterError
from hsge.graph import AttributedGraph
from hsge.oracle import enumerate_connected, exact_walk_distribution
from hsge.sampling import SamplerParams, sample_graphlets

from conftest import random_connected_graph


def empirical_class_distribution(graphlets, universe):
    """Per-size distribution over isomorphism classes, oracle-classified."""
    per_size: dict[int, Counter] = {}
    memo = {}
    for g in graphlets:
        key = g.edges
        idx = memo.get(key)
        if idx is None:
            idx = universe.classify(g)
            memo[key] = idx
        per_size.setdefault(g.t, Counter())[idx] += 1
    out = {}
    for t, counter in per_size.items():
        total = sum(counter.values())
        out[t] = {idx: c / total for idx, c in counter.items()}
    return out


def total_variation(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


class TestBasics:
    def test_single_edge_graph(self):
        g = AttributedGraph(2, [(0, 1)])
        out = sample_graphlets(g, SamplerParams(M=1, T=1, seed=0))
        assert len(out) == 1
        assert out[0].edges == ((0, 1),)

    def test_triangle_exhausts(self, triangle):
        out = sample_graphlets(triangle, SamplerParams(M=5, T=3, seed=1))
        assert len(out) == 15  # no dead end can occur before T
        for g in out:
            if g.t == 3:
                assert g.edges == ((0, 1), (0, 2), (1, 2))

    def test_edgeless_graph_warns(self):
        g = AttributedGraph(3, [])
        with pytest.warns(UserWarning):
            assert sample_graphlets(g, SamplerParams(M=3, T=2, seed=0)) == []

    def test_param_validation(self):
        with pytest.raises(ParameterError):
            SamplerParams(M=0, T=1)
        with pytest.raises(ParameterError):
            SamplerParams(M=1, T=0)

    def test_dead_end_truncates_restart(self):
        g = AttributedGraph(2, [(0, 1)])
        out = sample_graphlets(g, SamplerParams(M=4, T=3, seed=2))
        assert len(out) == 4  # each restart dies after the only edge


class TestInvariants:
    def test_emitted_graphlets_connected_and_growing(self):
        rng = random.Random(101)
        for _ in range(10):
            g = random_connected_graph(rng, rng.randrange(4, 10),
                                       extra_edges=rng.randrange(5))
            out = sample_graphlets(g, SamplerParams(M=20, T=4, seed=7))
            prev_t = 0
            for glet in out:
                from hsge.graph import _edges_connected
                assert _edges_connected(list(glet.edges))
                assert set(glet.nodes) == {u for e in glet.edges for u in e}
                # growth within a restart: size increments by one, resets to 1
                assert glet.t == prev_t + 1 or glet.t == 1
                prev_t = glet.t

    def test_determinism(self, two_triangles_bridge):
        p = SamplerParams(M=50, T=4, seed=123)
        a = sample_graphlets(two_triangles_bridge, p)
        b = sample_graphlets(two_triangles_bridge, p)
        assert [g.edges for g in a] == [g.edges for g in b]

    def test_different_seed_different_stream(self, two_triangles_bridge):
        a = sample_graphlets(two_triangles_bridge, SamplerParams(M=50, T=4, seed=1))
        b = sample_graphlets(two_triangles_bridge, SamplerParams(M=50, T=4, seed=2))
        assert [g.edges for g in a] != [g.edges for g in b]


class TestDistribution:
    @pytest.mark.parametrize("seed", [0, 1])
    def test_matches_exact_walk_distribution(self, two_triangles_bridge, seed):
        universe = enumerate_connected(3)
        exact = exact_walk_distribution(two_triangles_bridge, 3,
                                        universe=universe)
        out = sample_graphlets(two_triangles_bridge,
                               SamplerParams(M=4000, T=3, seed=seed))
        empirical = empirical_class_distribution(out, universe)
        for t in (1, 2, 3):
            assert total_variation(empirical[t], exact[t]) < 0.05

    def test_seed_to_seed_stability(self):
        rng = random.Random(55)
        g = random_connected_graph(rng, 9, extra_edges=4)
        universe = enumerate_connected(3)
        dists = []
        for seed in (10, 20):
            out = sample_graphlets(g, SamplerParams(M=4000, T=3, seed=seed))
            dists.append(empirical_class_distribution(out, universe))
        for t in (1, 2, 3):
            assert total_variation(dists[0][t], dists[1][t]) <= 0.05

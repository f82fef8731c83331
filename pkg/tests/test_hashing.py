import random
from itertools import combinations

import numpy as np
import pytest

from hsge.errors import FormatVersionError, ParameterError, StateError
from hsge.graph import AttributedGraph, Graphlet, Label, induced_graphlet
from hsge.hashing import (GraphletVocabulary, HashCode, Histogram,
                          accumulate_histogram, betweenness_hash, degree_hash,
                          discretize_attributes, graphlet_code)
from hsge.oracle import enumerate_connected, is_isomorphic
from hsge.sampling import SamplerParams, sample_graphlets

from conftest import random_connected_graph


def whole_graph_graphlet(graph):
    return Graphlet(graph, graph.edges)


class TestDegreeHash:
    def test_triangle(self, triangle):
        assert degree_hash(whole_graph_graphlet(triangle)).topology == (2, 2, 2)

    def test_two_edge_path(self, path3):
        assert degree_hash(whole_graph_graphlet(path3)).topology == (1, 1, 2)

    def test_star3(self, star3):
        assert degree_hash(whole_graph_graphlet(star3)).topology == (1, 1, 1, 3)


class TestBetweennessHash:
    def test_triangle(self, triangle):
        assert betweenness_hash(whole_graph_graphlet(triangle)).topology == \
            (0.0, 0.0, 0.0)

    def test_two_edge_path(self, path3):
        assert betweenness_hash(whole_graph_graphlet(path3)).topology == \
            (0.0, 0.0, 1.0)

    def test_four_cycle(self, four_cycle):
        assert betweenness_hash(whole_graph_graphlet(four_cycle)).topology == \
            (0.5, 0.5, 0.5, 0.5)


class TestGraphletCode:
    def test_unlabeled_triangle(self, triangle):
        code = graphlet_code(whole_graph_graphlet(triangle))
        assert code == HashCode(topology=(2, 2, 2))

    def test_labeled_single_edge(self):
        g = AttributedGraph(2, [(0, 1)],
                            node_labels=[Label(symbols=("N",)),
                                         Label(symbols=("C",))],
                            edge_labels={(0, 1): Label(symbols=("1",))})
        code = graphlet_code(whole_graph_graphlet(g), labeled=True)
        assert code.topology == (1, 1)
        assert code.attributes == ("C", "N", "1")

    def test_five_edges_use_betweenness(self):
        g = AttributedGraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
        glet = whole_graph_graphlet(g)
        assert glet.t == 5
        assert graphlet_code(glet) == betweenness_hash(glet)
        four = induced_graphlet(g, g.edges[:4])
        assert graphlet_code(four) == degree_hash(four)

    def test_continuous_attributes_rejected(self):
        g = AttributedGraph(2, [(0, 1)],
                            node_labels=[Label(attributes=(0.5,)),
                                         Label(attributes=(1.5,))])
        with pytest.raises(StateError):
            graphlet_code(whole_graph_graphlet(g), labeled=True)

    def test_isomorphic_relabelings_share_codes(self):
        rng = random.Random(77)
        for _ in range(20):
            g = random_connected_graph(rng, rng.randrange(4, 8),
                                       extra_edges=rng.randrange(4),
                                       symbols="AB")
            perm = list(range(g.num_nodes))
            rng.shuffle(perm)
            edges = [(perm[u], perm[v]) for (u, v) in g.edges]
            node_labels = [None] * g.num_nodes
            for u in range(g.num_nodes):
                node_labels[perm[u]] = g.node_labels[u]
            edge_labels = {(min(perm[u], perm[v]), max(perm[u], perm[v])):
                           g.edge_labels[(u, v)] for (u, v) in g.edges}
            g2 = AttributedGraph(g.num_nodes, edges, node_labels=node_labels,
                                 edge_labels=edge_labels)
            for labeled in (False, True):
                assert graphlet_code(whole_graph_graphlet(g), labeled) == \
                    graphlet_code(whole_graph_graphlet(g2), labeled)


class TestCollisionAudits:
    def test_degree_hash_collision_free_up_to_four_edges(self):
        universe = enumerate_connected(4)
        for t in range(1, 5):
            reps = [c.rep for _, c in universe.classes_with(t)]
            codes = [degree_hash(whole_graph_graphlet(r)) for r in reps]
            assert len(set(codes)) == len(reps)

    def test_betweenness_hash_rate_at_five_and_six_edges(self):
        universe = enumerate_connected(6)
        for t in (5, 6):
            reps = [c.rep for _, c in universe.classes_with(t)]
            codes = [betweenness_hash(whole_graph_graphlet(r)) for r in reps]
            pairs = len(reps) * (len(reps) - 1) // 2
            collisions = sum(1 for i, j in combinations(range(len(reps)), 2)
                             if codes[i] == codes[j])
            assert collisions / pairs <= 1e-3

    def test_degree_sequence_collides_at_five_edges_betweenness_does_not(self):
        universe = enumerate_connected(5)
        reps = [c.rep for _, c in universe.classes_with(5)]
        same_degree = [(a, b) for a, b in combinations(reps, 2)
                       if degree_hash(whole_graph_graphlet(a)) ==
                       degree_hash(whole_graph_graphlet(b))]
        assert same_degree, "expected a degree-sequence collision at t=5"
        for a, b in same_degree:
            assert not is_isomorphic(a, b, ignore_labels=True)
            assert betweenness_hash(whole_graph_graphlet(a)) != \
                betweenness_hash(whole_graph_graphlet(b))

    def test_colliding_degree_pair_lands_in_distinct_bins(self):
        universe = enumerate_connected(5)
        reps = [c.rep for _, c in universe.classes_with(5)]
        a, b = next((x, y) for x, y in combinations(reps, 2)
                    if degree_hash(whole_graph_graphlet(x)) ==
                    degree_hash(whole_graph_graphlet(y)))
        vocab = GraphletVocabulary()
        accumulate_histogram([whole_graph_graphlet(a),
                              whole_graph_graphlet(b)], vocab)
        vocab.finalize()
        ca = graphlet_code(whole_graph_graphlet(a))
        cb = graphlet_code(whole_graph_graphlet(b))
        assert vocab.bin_of(5, ca) != vocab.bin_of(5, cb)


class TestVocabulary:
    def test_building_then_lookup_with_overflow(self, triangle, star3):
        vocab = GraphletVocabulary()
        tri = whole_graph_graphlet(triangle)
        accumulate_histogram([tri], vocab)
        vocab.finalize()
        star = whole_graph_graphlet(star3)
        hist = accumulate_histogram([tri, star], vocab)
        assert hist.counts[3][graphlet_code(tri)] == 1
        assert hist.overflow[3] == 1
        assert hist.total(3) == 2

    def test_finalized_vocab_is_immutable(self, triangle):
        vocab = GraphletVocabulary()
        vocab.add(1, HashCode(topology=(1, 1)))
        vocab.finalize()
        with pytest.raises(StateError):
            vocab.add(1, HashCode(topology=(1, 2)))

    def test_bins_are_lexicographic(self):
        vocab = GraphletVocabulary()
        codes = [HashCode(topology=(1, 1, 2)), HashCode(topology=(1, 1, 1, 3)),
                 HashCode(topology=(2, 2, 2))]
        for c in reversed(codes):
            vocab.add(3, c)
        vocab.finalize()
        ordered = vocab.codes(3)
        assert ordered == sorted(codes)
        assert [vocab.bin_of(3, c) for c in ordered] == [0, 1, 2]

    def test_text_round_trip(self):
        rng = random.Random(3)
        g = random_connected_graph(rng, 9, extra_edges=6, symbols="CNO")
        vocab = GraphletVocabulary()
        glets = sample_graphlets(g, SamplerParams(M=200, T=6, seed=5))
        accumulate_histogram(glets, vocab, labeled=True)
        vocab.finalize()
        lines = vocab.to_lines()
        back = GraphletVocabulary.from_lines(lines)
        assert back.sizes() == vocab.sizes()
        for t in vocab.sizes():
            assert back.codes(t) == vocab.codes(t)
            for code in vocab.codes(t):
                assert back.bin_of(t, code) == vocab.bin_of(t, code)

    def test_bad_header_rejected(self):
        with pytest.raises(FormatVersionError):
            GraphletVocabulary.from_lines(["nonsense"])


class TestHistogramMass:
    def test_counts_sum_to_emissions(self):
        rng = random.Random(13)
        for _ in range(10):
            g = random_connected_graph(rng, rng.randrange(5, 10),
                                       extra_edges=rng.randrange(4))
            glets = sample_graphlets(g, SamplerParams(M=60, T=4, seed=3))
            vocab = GraphletVocabulary()
            hist = accumulate_histogram(glets, vocab)
            by_size = {}
            for glet in glets:
                by_size[glet.t] = by_size.get(glet.t, 0) + 1
            for t, n in by_size.items():
                assert hist.total(t) == n


class TestDiscretize:
    def test_k1_single_token(self):
        g = AttributedGraph(2, [(0, 1)],
                            node_labels=[Label(attributes=(0.0, 1.0)),
                                         Label(attributes=(5.0, 3.0))])
        out, = discretize_attributes([g], k=1)
        toks = {lab.symbols[-1] for lab in out.node_labels}
        assert len(toks) == 1
        assert all(not lab.attributes for lab in out.node_labels)

    def test_two_separated_clouds(self):
        rng = random.Random(9)
        pts = [(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(5)] + \
              [(rng.uniform(40, 41), rng.uniform(40, 41)) for _ in range(5)]
        labels = [Label(attributes=p) for p in pts]
        g = AttributedGraph(10, [(i, i + 1) for i in range(9)],
                            node_labels=labels)
        out, = discretize_attributes([g], k=2)
        tokens = [lab.symbols[-1] for lab in out.node_labels]
        # brute-force optimal 2-means over all bipartitions
        best, best_sse = None, float("inf")
        points = np.asarray(pts)
        for bits in range(1, 2 ** 10 - 1):
            part = [bool(bits >> i & 1) for i in range(10)]
            sse = 0.0
            for side in (True, False):
                cloud = points[[i for i in range(10) if part[i] == side]]
                if len(cloud):
                    sse += float(((cloud - cloud.mean(axis=0)) ** 2).sum())
            if sse < best_sse:
                best_sse, best = sse, tuple(part)
        groups = {}
        for tok, side in zip(tokens, best):
            groups.setdefault(tok, set()).add(side)
        assert all(len(sides) == 1 for sides in groups.values())

    def test_identity_without_attributes(self, triangle):
        out = discretize_attributes([triangle], k=3)
        assert out[0] is triangle

    def test_k_reduced_with_warning(self):
        g = AttributedGraph(2, [(0, 1)],
                            node_labels=[Label(attributes=(1.0,)),
                                         Label(attributes=(1.0,))])
        with pytest.warns(UserWarning):
            discretize_attributes([g], k=5)

    def test_k_domain(self, triangle):
        with pytest.raises(ParameterError):
            discretize_attributes([triangle], k=0)

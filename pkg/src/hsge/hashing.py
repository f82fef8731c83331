"""Graphlet hash codes, the global code vocabulary, and histograms.

A graphlet's topology code is its ascending degree sequence for up to
four edges, and its ascending node-betweenness sequence (rounded to six
decimals) from five edges on; sorted sequences are isomorphism
invariants, so isomorphic graphlets always share a code. For labeled
runs the sorted node symbols followed by the sorted edge symbols are
appended as the attribute part of the code.

The vocabulary maps codes to dense per-size bin indices. While building
it grows as new codes appear; once finalized, bins are frozen in
lexicographic code order (making vector layouts reproducible regardless
of accumulation order) and codes never seen during building are counted
into one overflow bin per size.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

import numpy as np

from .centrality import node_betweenness_values
from .errors import FormatVersionError, ParameterError, ParseError, StateError
from .graph import AttributedGraph, Graphlet, Label

__all__ = ["HashCode", "GraphletVocabulary", "Histogram", "degree_hash",
           "betweenness_hash", "graphlet_code", "accumulate_histogram",
           "discretize_attributes", "BETWEENNESS_DECIMALS", "DEGREE_HASH_MAX_EDGES"]

#: Betweenness values are rounded to this many decimals before sorting so
#: the resulting codes hash and serialize identically across platforms.
BETWEENNESS_DECIMALS = 6

#: Largest graphlet size hashed by degree sequence; degree sequences are
#: collision-free among non-isomorphic connected graphs up to this size.
DEGREE_HASH_MAX_EDGES = 4


@dataclass(frozen=True, order=True)
class HashCode:
    """Ordered, hashable graphlet signature (topology plus attributes)."""

    topology: tuple
    attributes: tuple = ()

    def to_text(self) -> str:
        topo = ",".join(
            format(x, ".6f") if isinstance(x, float) else str(x)
            for x in self.topology)
        attrs = ";".join(quote(str(a), safe="") for a in self.attributes)
        return f"{topo}|{attrs}"

    @staticmethod
    def from_text(text: str) -> "HashCode":
        topo_part, _, attr_part = text.partition("|")
        topo = tuple(float(tok) if "." in tok else int(tok)
                     for tok in topo_part.split(",") if tok != "")
        attrs = tuple(unquote(tok) for tok in attr_part.split(";")) \
            if attr_part else ()
        return HashCode(topology=topo, attributes=attrs)


def _degree_topology(edge_pairs) -> tuple:
    deg = Counter()
    for (u, v) in edge_pairs:
        deg[u] += 1
        deg[v] += 1
    return tuple(sorted(deg.values()))


def _betweenness_topology(edge_pairs) -> tuple:
    nodes = sorted({u for e in edge_pairs for u in e})
    index = {u: i for i, u in enumerate(nodes)}
    adj = [[] for _ in nodes]
    for (u, v) in edge_pairs:
        adj[index[u]].append(index[v])
        adj[index[v]].append(index[u])
    values = node_betweenness_values(adj)
    return tuple(sorted(round(v, BETWEENNESS_DECIMALS) for v in values))


def degree_hash(graphlet: Graphlet) -> HashCode:
    """Ascending degree sequence within the graphlet."""
    return HashCode(topology=_degree_topology(graphlet.edges))


def betweenness_hash(graphlet: Graphlet) -> HashCode:
    """Ascending node betweenness within the graphlet, rounded to 6 decimals."""
    return HashCode(topology=_betweenness_topology(graphlet.edges))


def _symbol_token(label: Label) -> str:
    return ",".join(label.symbols)


def code_for_edges(parent: AttributedGraph, edge_pairs, labeled: bool) -> HashCode:
    """Hash code of the connected edge set ``edge_pairs`` of ``parent``."""
    if len(edge_pairs) <= DEGREE_HASH_MAX_EDGES:
        topo = _degree_topology(edge_pairs)
    else:
        topo = _betweenness_topology(edge_pairs)
    if not labeled:
        return HashCode(topology=topo)
    nodes = {u for e in edge_pairs for u in e}
    node_part = []
    for u in nodes:
        label = parent.node_labels[u]
        if label.attributes:
            raise StateError(
                "graphlet carries continuous attributes; discretize first")
        node_part.append(_symbol_token(label))
    edge_part = []
    for e in edge_pairs:
        label = parent.edge_labels[e]
        if label.attributes:
            raise StateError(
                "graphlet carries continuous edge attributes; discretize first")
        edge_part.append(_symbol_token(label))
    node_part.sort()
    edge_part.sort()
    return HashCode(topology=topo, attributes=tuple(node_part + edge_part))


def graphlet_code(graphlet: Graphlet, labeled: bool = False) -> HashCode:
    """Full hash code of a graphlet: topology part plus, when ``labeled``,
    the sorted node symbols followed by the sorted edge symbols."""
    return code_for_edges(graphlet.parent, graphlet.edges, labeled)


class GraphletVocabulary:
    """Global per-size mapping from hash codes to histogram bins."""

    def __init__(self):
        self._codes: dict[int, set[HashCode]] = {}
        self._bins: dict[int, dict[HashCode, int]] = {}
        self._finalized = False

    @property
    def finalized(self) -> bool:
        return self._finalized

    def add(self, t: int, code: HashCode) -> None:
        if self._finalized:
            raise StateError("vocabulary is finalized; lookups only")
        self._codes.setdefault(t, set()).add(code)

    def contains(self, t: int, code: HashCode) -> bool:
        return code in self._codes.get(t, ())

    def finalize(self) -> "GraphletVocabulary":
        """Freeze bin positions in lexicographic code order."""
        self._bins = {t: {code: i for i, code in enumerate(sorted(codes))}
                      for t, codes in self._codes.items()}
        self._finalized = True
        return self

    def bin_of(self, t: int, code: HashCode):
        """Dense bin index, or None for codes outside the vocabulary."""
        if not self._finalized:
            raise StateError("finalize the vocabulary before bin lookups")
        return self._bins.get(t, {}).get(code)

    def codes(self, t: int) -> list[HashCode]:
        return sorted(self._codes.get(t, ()))

    def num_bins(self, t: int) -> int:
        return len(self._codes.get(t, ()))

    def sizes(self) -> list[int]:
        return sorted(self._codes)

    def __len__(self):
        return sum(len(c) for c in self._codes.values())

    # -- versioned text serialization: one line per (size, code, bin) --

    FORMAT_HEADER = "hsge-vocab 1"

    def to_lines(self) -> list[str]:
        if not self._finalized:
            raise StateError("only finalized vocabularies serialize")
        lines = [self.FORMAT_HEADER]
        for t in self.sizes():
            for code, idx in sorted(self._bins[t].items(),
                                    key=lambda item: item[1]):
                lines.append(f"{t}\t{code.to_text()}\t{idx}")
        return lines

    @classmethod
    def from_lines(cls, lines, source="<vocabulary>") -> "GraphletVocabulary":
        lines = list(lines)
        if not lines or lines[0].strip() != cls.FORMAT_HEADER:
            raise FormatVersionError(
                f"{source}: expected header {cls.FORMAT_HEADER!r}")
        vocab = cls()
        parsed: dict[int, dict[int, HashCode]] = {}
        for ln, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ParseError("expected 'size<TAB>code<TAB>bin'",
                                 path=source, line=ln)
            try:
                t, idx = int(parts[0]), int(parts[2])
                code = HashCode.from_text(parts[1])
            except ValueError as exc:
                raise ParseError(str(exc), path=source, line=ln) from exc
            parsed.setdefault(t, {})[idx] = code
        for t, by_idx in parsed.items():
            for code in by_idx.values():
                vocab.add(t, code)
        vocab.finalize()
        for t, by_idx in parsed.items():
            for idx, code in by_idx.items():
                if vocab.bin_of(t, code) != idx:
                    raise ParseError(
                        f"bins for size {t} are not in lexicographic order",
                        path=source)
        return vocab


@dataclass
class Histogram:
    """Per-size graphlet counts, keyed by hash code, plus overflow tallies."""

    counts: dict[int, Counter] = field(default_factory=dict)
    overflow: dict[int, int] = field(default_factory=dict)

    def add(self, t: int, code: HashCode, n: int = 1) -> None:
        self.counts.setdefault(t, Counter())[code] += n

    def add_overflow(self, t: int, n: int = 1) -> None:
        self.overflow[t] = self.overflow.get(t, 0) + n

    def total(self, t: int) -> int:
        return sum(self.counts.get(t, {}).values()) + self.overflow.get(t, 0)

    def sizes(self) -> list[int]:
        return sorted(set(self.counts) | set(self.overflow))

    def merge(self, other: "Histogram") -> None:
        for t, counter in other.counts.items():
            self.counts.setdefault(t, Counter()).update(counter)
        for t, n in other.overflow.items():
            self.add_overflow(t, n)


def accumulate_histogram(graphlets, vocab: GraphletVocabulary,
                         labeled: bool = False) -> Histogram:
    """Count graphlets into a histogram against ``vocab``.

    While the vocabulary is building, unseen codes are added to it; once
    it is finalized, graphlets with unseen codes land in the per-size
    overflow bin.
    """
    hist = Histogram()
    memo: dict[tuple, HashCode] = {}
    building = not vocab.finalized
    for g in graphlets:
        key = (id(g.parent), g.edges)
        code = memo.get(key)
        if code is None:
            code = graphlet_code(g, labeled=labeled)
            memo[key] = code
        t = g.t
        if building:
            vocab.add(t, code)
            hist.add(t, code)
        elif vocab.contains(t, code):
            hist.add(t, code)
        else:
            hist.add_overflow(t)
    return hist


def sample_histogram(graph: AttributedGraph, params: SamplerParams,
                     labeled: bool = False) -> Histogram:
    """Sample a graph straight into a raw code histogram.

    Equivalent to ``accumulate_histogram(sample_graphlets(...), building)``
    for the same seed (the walk stream is shared) but skips per-emission
    graphlet objects: emissions are tallied by edge subset and each
    distinct subset is coded once.
    """
    if graph.num_edges == 0:
        warnings.warn("graph has no edges; nothing to sample", stacklevel=2)
        return Histogram()
    key_counts: dict[int, Counter] = {}
    for t, acc in walk_edge_sets(graph, params):
        key = tuple(sorted(acc))
        key_counts.setdefault(t, Counter())[key] += 1
    hist = Histogram()
    edges = graph.edges
    for t, counter in key_counts.items():
        for key, n in counter.items():
            code = code_for_edges(graph, [edges[e] for e in key], labeled)
            hist.add(t, code, n)
    return hist


def _relabel(label: Label, token) -> Label:
    if token is None:
        return label
    return Label(symbols=label.symbols + (token,), attributes=())


def discretize_attributes(graphs, k: int, seed: int = 0) -> list[AttributedGraph]:
    """Replace continuous attribute vectors with nearest-centroid tokens.

    Node and edge attributes are clustered separately with seeded k-means
    over the pooled vectors of the whole dataset. Datasets without
    continuous attributes pass through unchanged. ``k`` larger than the
    number of distinct vectors is reduced with a warning.
    """
    from sklearn.cluster import KMeans

    if k < 1:
        raise ParameterError("k must be >= 1")

    def fit(vectors, tag):
        if not vectors:
            return None
        arr = np.asarray(vectors, dtype=float)
        distinct = len(np.unique(arr, axis=0))
        k_eff = min(k, distinct)
        if k_eff < k:
            warnings.warn(
                f"reducing {tag} clusters from {k} to {k_eff} "
                f"(only {distinct} distinct vectors)", stacklevel=3)
        km = KMeans(n_clusters=k_eff, random_state=seed, n_init=10)
        km.fit(arr)
        return km

    node_vecs = [list(lab.attributes) for g in graphs
                 for lab in g.node_labels if lab.attributes]
    edge_vecs = [list(lab.attributes) for g in graphs
                 for lab in g.edge_labels.values() if lab.attributes]
    node_km = fit(node_vecs, "node")
    edge_km = fit(edge_vecs, "edge")
    if node_km is None and edge_km is None:
        return list(graphs)

    def node_token(label):
        if not label.attributes or node_km is None:
            return None
        j = int(node_km.predict(np.asarray([label.attributes], dtype=float))[0])
        return f"q{j}"

    def edge_token(label):
        if not label.attributes or edge_km is None:
            return None
        j = int(edge_km.predict(np.asarray([label.attributes], dtype=float))[0])
        return f"qe{j}"

    out = []
    for g in graphs:
        node_labels = [_relabel(lab, node_token(lab)) for lab in g.node_labels]
        edge_labels = {e: _relabel(lab, edge_token(lab))
                       for e, lab in g.edge_labels.items()}
        out.append(AttributedGraph(g.num_nodes, g.edges,
                                   node_labels=node_labels,
                                   edge_labels=edge_labels,
                                   node_origins=g.node_origins))
    return out

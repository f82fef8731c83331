"""Multi-level graph construction by repeated clustering.

Each level clusters the one below it; every cluster becomes one node of
the next level, labeled by a majority/mean summary of its members. Two
cluster nodes are joined when the member-to-member edge density between
their clusters reaches the connection-ratio threshold, and every clustered
node is tied to its summary node by a hierarchical edge.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .clustering import girvan_newman, target_cluster_count
from .errors import ParameterError
from .graph import UNLABELED, AttributedGraph, HierarchicalGraph, Label

__all__ = ["HierarchyParams", "connection_ratio", "cluster_label", "build_hierarchy"]


@dataclass(frozen=True)
class HierarchyParams:
    """Knobs for pyramid construction.

    levels: number of levels above the base graph.
    r: per-level reduction ratio in (0, 1]; level i+1 has max(1, floor(r*n)) nodes.
    delta: connection-ratio threshold in [0, 1] for next-level edges.
    """

    levels: int = 2
    r: float = 0.5
    delta: float = 0.0

    def __post_init__(self):
        if self.levels < 0:
            raise ParameterError("levels must be >= 0")
        if not (0.0 < self.r <= 1.0):
            raise ParameterError("r must be in (0, 1]")
        if not (0.0 <= self.delta <= 1.0):
            raise ParameterError("delta must be in [0, 1]")


def connection_ratio(graph: AttributedGraph, group_a, group_b) -> float:
    """Crossing-edge count between two disjoint node groups, normalized
    by ``|A| * |B|`` so the value lives in [0, 1]."""
    set_a, set_b = set(group_a), set(group_b)
    if not set_a or not set_b:
        raise ParameterError("groups must be non-empty")
    if set_a & set_b:
        raise ParameterError("groups overlap")
    crossing = 0
    small, other = (set_a, set_b) if len(set_a) <= len(set_b) else (set_b, set_a)
    for u in small:
        for v, _ in graph.adjacency[u]:
            if v in other:
                crossing += 1
    return crossing / (len(set_a) * len(set_b))


def cluster_label(graph: AttributedGraph, group) -> Label:
    """Summary label for a node group: majority symbols, mean attributes.

    Symbol ties break toward the lexicographically smallest symbol tuple.
    A group of unlabeled nodes summarizes to the unlabeled label.
    """
    members = list(group)
    if not members:
        raise ParameterError("cannot label an empty cluster")
    symbol_votes = Counter(graph.node_labels[u].symbols for u in members)
    nonempty = {s: c for s, c in symbol_votes.items() if s}
    if nonempty:
        top = max(nonempty.values())
        symbols = min(s for s, c in nonempty.items() if c == top)
    else:
        symbols = ()
    attr_vectors = [graph.node_labels[u].attributes for u in members
                    if graph.node_labels[u].attributes]
    if attr_vectors:
        dims = len(attr_vectors[0])
        if any(len(a) != dims for a in attr_vectors):
            raise ParameterError("attribute vectors differ in length within a cluster")
        attributes = tuple(sum(a[i] for a in attr_vectors) / len(attr_vectors)
                           for i in range(dims))
    else:
        attributes = ()
    if not symbols and not attributes:
        return UNLABELED
    return Label(symbols=symbols, attributes=attributes)


def build_hierarchy(graph: AttributedGraph, params: HierarchyParams) -> HierarchicalGraph:
    """Build the pyramid: base graph plus ``params.levels`` coarsenings.

    Construction stops early once a level shrinks to a single node, since
    clustering it further is degenerate.
    """
    if graph.num_nodes == 0:
        raise ParameterError("cannot build a hierarchy over an empty graph")
    levels = [graph]
    cluster_of: list[tuple[int, ...]] = []
    for _ in range(params.levels):
        prev = levels[-1]
        if prev.num_nodes == 1:
            break
        k = target_cluster_count(prev.num_nodes, params.r)
        clustering = girvan_newman(prev, k)
        groups = clustering.clusters
        node_labels = [cluster_label(prev, g) for g in groups]
        edges = []
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                ratio = connection_ratio(prev, groups[i], groups[j])
                if ratio > 0.0 and ratio >= params.delta:
                    edges.append((i, j))
        level = AttributedGraph(len(groups), edges, node_labels=node_labels)
        cluster_of.append(tuple(clustering.membership(prev.num_nodes)))
        levels.append(level)
    return HierarchicalGraph(levels, cluster_of)

"""Core attributed- and hierarchical-graph data model.

Graphs are undirected, simple (no self-loops, no parallel edges) and
immutable after construction. Nodes are the integers ``0..n-1``. Every
node and edge carries a :class:`Label`; the distinguished empty label
:data:`UNLABELED` marks unlabeled elements.

A hierarchy stacks several such graphs. A node of level ``l`` is
identified across levels by the pair ``(level, local_index)``, which is
also the identity used when hierarchies are serialized.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InvalidGraphletError, LevelRangeError, ParameterError, UnknownEdgeError


@dataclass(frozen=True)
class Label:
    """Symbolic tokens plus real-valued attributes attached to a node or edge."""

    symbols: tuple[str, ...] = ()
    attributes: tuple[float, ...] = ()

    @property
    def is_unlabeled(self) -> bool:
        return not self.symbols and not self.attributes


UNLABELED = Label()

#: Reserved label carried by hierarchical edges inside level slices, so that
#: graphlet signatures can tell them apart from neighborhood edges.
HIER_LABEL = Label(symbols=("HIER",))


def _canonical_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class AttributedGraph:
    """Undirected simple graph with labeled nodes and edges.

    Parameters
    ----------
    num_nodes:
        Number of nodes; nodes are ``0..num_nodes-1``.
    edges:
        Iterable of ``(u, v)`` pairs. Stored sorted, endpoint-ascending.
    node_labels / edge_labels:
        Optional sequences aligned with nodes / the (canonicalized, sorted)
        edge list. Missing labels default to :data:`UNLABELED`.
    node_origins:
        Optional provenance, e.g. ``(level, local_index)`` pairs for graphs
        assembled from several hierarchy levels.
    """

    __slots__ = ("num_nodes", "edges", "node_labels", "edge_labels",
                 "node_origins", "_edge_index", "_adj")

    def __init__(self, num_nodes: int, edges: Iterable[tuple[int, int]],
                 node_labels: Optional[Sequence[Label]] = None,
                 edge_labels: Optional[dict[tuple[int, int], Label]] = None,
                 node_origins: Optional[Sequence[tuple[int, int]]] = None):
        if num_nodes < 0:
            raise ParameterError("num_nodes must be non-negative")
        canon = []
        seen = set()
        for (u, v) in edges:
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ParameterError(f"edge ({u},{v}) references a missing node")
            e = _canonical_edge(u, v)
            if e in seen:
                raise ParameterError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.num_nodes = num_nodes
        self.edges: tuple[tuple[int, int], ...] = tuple(canon)
        if node_labels is None:
            self.node_labels = (UNLABELED,) * num_nodes
        else:
            if len(node_labels) != num_nodes:
                raise ParameterError("node_labels length mismatch")
            self.node_labels = tuple(node_labels)
        lbl = dict(edge_labels) if edge_labels else {}
        self.edge_labels = {e: lbl.get(e, lbl.get((e[1], e[0]), UNLABELED))
                            for e in self.edges}
        unknown = set(_canonical_edge(*e) for e in lbl) - set(self.edges)
        if unknown:
            raise ParameterError(f"edge labels for missing edges: {sorted(unknown)}")
        self.node_origins = tuple(node_origins) if node_origins is not None else None
        self._edge_index = {e: i for i, e in enumerate(self.edges)}
        self._adj = None

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-node list of ``(neighbor, edge_id)`` pairs."""
        if self._adj is None:
            adj = [[] for _ in range(self.num_nodes)]
            for eid, (u, v) in enumerate(self.edges):
                adj[u].append((v, eid))
                adj[v].append((u, eid))
            self._adj = adj
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return _canonical_edge(u, v) in self._edge_index

    def edge_id(self, u: int, v: int) -> int:
        e = _canonical_edge(u, v)
        if e not in self._edge_index:
            raise UnknownEdgeError(e)
        return self._edge_index[e]

    def node_label(self, u: int) -> Label:
        return self.node_labels[u]

    def edge_label(self, u: int, v: int) -> Label:
        e = _canonical_edge(u, v)
        if e not in self.edge_labels:
            raise UnknownEdgeError(e)
        return self.edge_labels[e]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def connected_components(self) -> list[list[int]]:
        """Components as sorted node lists, ordered by smallest member."""
        seen = [False] * self.num_nodes
        comps = []
        adj = self.adjacency
        for s in range(self.num_nodes):
            if seen[s]:
                continue
            stack = [s]
            seen[s] = True
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v, _ in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comp.sort()
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        if self.num_nodes <= 1:
            return True
        return len(self.connected_components()) == 1

    def __repr__(self):
        return f"AttributedGraph(n={self.num_nodes}, m={self.num_edges})"


class Graphlet:
    """Connected edge-induced subgraph of an :class:`AttributedGraph`.

    The edge set determines the node set; labels are inherited unchanged
    from the parent. Edge order is canonical (sorted endpoint pairs).
    """

    __slots__ = ("parent", "edges", "nodes")

    def __init__(self, parent: AttributedGraph, edges: Sequence[tuple[int, int]],
                 nodes: Optional[Sequence[int]] = None):
        self.parent = parent
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(edges))
        if nodes is None:
            ns = set()
            for (u, v) in self.edges:
                ns.add(u)
                ns.add(v)
            self.nodes = tuple(sorted(ns))
        else:
            self.nodes = tuple(sorted(nodes))

    @property
    def t(self) -> int:
        """Edge count of the graphlet."""
        return len(self.edges)

    def node_label(self, u: int) -> Label:
        return self.parent.node_labels[u]

    def edge_label(self, u: int, v: int) -> Label:
        return self.parent.edge_label(u, v)

    def local_adjacency(self) -> list[list[int]]:
        """Adjacency over graphlet-local node indices ``0..len(nodes)-1``."""
        index = {u: i for i, u in enumerate(self.nodes)}
        adj = [[] for _ in self.nodes]
        for (u, v) in self.edges:
            iu, iv = index[u], index[v]
            adj[iu].append(iv)
            adj[iv].append(iu)
        return adj

    def degree_sequence(self) -> tuple[int, ...]:
        deg = Counter()
        for (u, v) in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(sorted(deg.values()))

    def __repr__(self):
        return f"Graphlet(t={self.t}, nodes={self.nodes})"


def _edges_connected(edges: Sequence[tuple[int, int]]) -> bool:
    if not edges:
        return False
    adj: dict[int, list[int]] = {}
    for (u, v) in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = edges[0][0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(adj)


def induced_graphlet(graph: AttributedGraph, edge_list: Sequence[tuple[int, int]]) -> Graphlet:
    """Build a graphlet from existing edges of ``graph``.

    The edges must exist in the parent and form a connected subgraph.
    """
    canon = []
    for (u, v) in edge_list:
        e = _canonical_edge(u, v)
        if e not in graph._edge_index:
            raise UnknownEdgeError(e)
        canon.append(e)
    if len(set(canon)) != len(canon):
        raise InvalidGraphletError("duplicate edges in graphlet edge list")
    if not _edges_connected(canon):
        raise InvalidGraphletError("edge set is not connected")
    return Graphlet(graph, canon)


class HierarchicalGraph:
    """Stack of coarsening levels plus the parent assignment between them.

    ``levels[0]`` is the base graph. ``cluster_of[l][u]`` is the node of
    level ``l+1`` that summarizes node ``u`` of level ``l``; the
    hierarchical edge set is exactly the graph of these assignments.
    """

    __slots__ = ("levels", "cluster_of")

    def __init__(self, levels: Sequence[AttributedGraph],
                 cluster_of: Sequence[Sequence[int]]):
        if not levels:
            raise ParameterError("a hierarchy needs at least the base level")
        if len(cluster_of) != len(levels) - 1:
            raise ParameterError("cluster_of must map every non-top level")
        for l in range(len(levels) - 1):
            lo, hi = levels[l], levels[l + 1]
            if hi.num_nodes > lo.num_nodes:
                raise ParameterError(
                    f"level {l + 1} has more nodes than level {l}")
            parents = cluster_of[l]
            if len(parents) != lo.num_nodes:
                raise ParameterError(f"cluster_of[{l}] must be total")
            for u, p in enumerate(parents):
                if not (0 <= p < hi.num_nodes):
                    raise ParameterError(
                        f"node {u}@{l} has out-of-range parent {p}")
        self.levels = tuple(levels)
        self.cluster_of = tuple(tuple(c) for c in cluster_of)

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def hierarchical_edges(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        """All ``((l, u), (l+1, parent))`` pairs."""
        out = []
        for l, parents in enumerate(self.cluster_of):
            for u, p in enumerate(parents):
                out.append(((l, u), (l + 1, p)))
        return tuple(out)

    def _check_range(self, l1: int, l2: int) -> None:
        if not (0 <= l1 <= l2 <= self.top_level):
            raise LevelRangeError(
                f"levels ({l1},{l2}) outside 0..{self.top_level}")

    def __repr__(self):
        sizes = ",".join(str(g.num_nodes) for g in self.levels)
        return f"HierarchicalGraph(levels=[{sizes}])"


def _stack_levels(hierarchy: HierarchicalGraph, l1: int, l2: int,
                  with_hierarchical: bool) -> AttributedGraph:
    offsets = {}
    origins = []
    node_labels = []
    total = 0
    for l in range(l1, l2 + 1):
        g = hierarchy.levels[l]
        offsets[l] = total
        for u in range(g.num_nodes):
            origins.append((l, u))
        node_labels.extend(g.node_labels)
        total += g.num_nodes
    edges = []
    edge_labels = {}
    for l in range(l1, l2 + 1):
        g = hierarchy.levels[l]
        off = offsets[l]
        for (u, v) in g.edges:
            e = (u + off, v + off)
            edges.append(e)
            edge_labels[e] = g.edge_labels[(u, v)]
    if with_hierarchical:
        for l in range(l1, l2):
            off_lo, off_hi = offsets[l], offsets[l + 1]
            for u, p in enumerate(hierarchy.cluster_of[l]):
                e = _canonical_edge(u + off_lo, p + off_hi)
                edges.append(e)
                edge_labels[e] = HIER_LABEL
    return AttributedGraph(total, edges, node_labels=node_labels,
                           edge_labels=edge_labels, node_origins=origins)


def level_slice(hierarchy: HierarchicalGraph, l1: int, l2: int) -> AttributedGraph:
    """Levels ``l1..l2`` plus the hierarchical edges between them.

    Hierarchical edges carry :data:`HIER_LABEL`. ``l1 == l2`` returns the
    plain level graph itself, with no hierarchical edges.
    """
    hierarchy._check_range(l1, l2)
    if l1 == l2:
        return hierarchy.levels[l1]
    return _stack_levels(hierarchy, l1, l2, with_hierarchical=True)


def level_union(hierarchy: HierarchicalGraph, l1: int, l2: int) -> AttributedGraph:
    """Disjoint union of levels ``l1..l2``, without hierarchical edges."""
    hierarchy._check_range(l1, l2)
    if l1 == l2:
        return hierarchy.levels[l1]
    return _stack_levels(hierarchy, l1, l2, with_hierarchical=False)

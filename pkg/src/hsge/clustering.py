"""Early-stopped divisive clustering by repeated edge removal.

The highest-betweenness edge is removed one at a time, recomputing edge
betweenness on the remaining graph after every removal, until the
connected components reach the requested count. Ties break on the
lexicographically smallest (min endpoint, max endpoint) pair so that
identical inputs always produce identical partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .centrality import edge_betweenness_adj
from .errors import ParameterError
from .graph import AttributedGraph

__all__ = ["Clustering", "girvan_newman", "target_cluster_count"]


@dataclass(frozen=True)
class Clustering:
    """Partition of a node set into non-empty groups."""

    clusters: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.clusters)

    def membership(self, num_nodes: int) -> list[int]:
        """cluster index per node."""
        member = [-1] * num_nodes
        for i, group in enumerate(self.clusters):
            for u in group:
                member[u] = i
        return member


def target_cluster_count(n: int, r: float) -> int:
    """Cluster count for one coarsening step: ``max(1, floor(r * n))``."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not (0.0 < r <= 1.0):
        raise ParameterError(f"reduction ratio must be in (0, 1], got {r}")
    return max(1, math.floor(r * n))


def _components(adj: list[set[int]]) -> list[list[int]]:
    n = len(adj)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comp.sort()
        comps.append(comp)
    return comps


def girvan_newman(graph: AttributedGraph, k: int) -> Clustering:
    """Cluster ``graph`` into (at least) ``k`` groups.

    Stops the first time the component count reaches ``k``. If the input
    already has more than ``k`` components, they are returned as-is: the
    target is raised to the component count.
    """
    n = graph.num_nodes
    if k <= 0:
        raise ParameterError("cluster count must be positive")
    if k > n:
        raise ParameterError(f"cluster count {k} exceeds node count {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    for (u, v) in graph.edges:
        adj[u].add(v)
        adj[v].add(u)
    remaining = graph.num_edges
    while True:
        comps = _components(adj)
        if len(comps) >= k or remaining == 0:
            return Clustering(tuple(tuple(c) for c in comps))
        scores = edge_betweenness_adj([sorted(s) for s in adj])
        best_edge = None
        best_score = -1.0
        for e in sorted(scores):  # sorted pairs make the tie-break total
            if scores[e] > best_score:
                best_score = scores[e]
                best_edge = e
        u, v = best_edge
        adj[u].discard(v)
        adj[v].discard(u)
        remaining -= 1

"""Exact unweighted betweenness centrality (Brandes accumulation).

Scores count unordered node pairs once. When several shortest paths tie,
each path carries an equal fraction of the pair's unit weight. Node
betweenness excludes the endpoints of a pair; edge betweenness counts the
pair's own edge. Pairs in different components contribute nothing.
"""

from __future__ import annotations

from collections import deque

from .graph import AttributedGraph

__all__ = ["edge_betweenness", "node_betweenness",
           "node_betweenness_values", "edge_betweenness_adj"]


def _single_source(adj, s, n):
    """BFS from s: returns (visit order, predecessor lists, path counts)."""
    dist = [-1] * n
    sigma = [0.0] * n
    preds = [[] for _ in range(n)]
    dist[s] = 0
    sigma[s] = 1.0
    order = []
    queue = deque([s])
    while queue:
        u = queue.popleft()
        order.append(u)
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
            if dist[v] == du:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return order, preds, sigma


def node_betweenness_values(adj) -> list[float]:
    """Node betweenness over an adjacency list (list of neighbor lists)."""
    n = len(adj)
    scores = [0.0] * n
    for s in range(n):
        order, preds, sigma = _single_source(adj, s, n)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
    # each unordered pair was visited from both endpoints
    return [x / 2.0 for x in scores]


def edge_betweenness_adj(adj) -> dict[tuple[int, int], float]:
    """Edge betweenness over an adjacency list; keys are sorted pairs."""
    n = len(adj)
    scores: dict[tuple[int, int], float] = {}
    for u in range(n):
        for v in adj[u]:
            if u < v:
                scores[(u, v)] = 0.0
    for s in range(n):
        order, preds, sigma = _single_source(adj, s, n)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                c = sigma[v] * coeff
                e = (v, w) if v < w else (w, v)
                scores[e] += c
                delta[v] += c
    return {e: x / 2.0 for e, x in scores.items()}


def _plain_adjacency(graph: AttributedGraph) -> list[list[int]]:
    return [[v for v, _ in nbrs] for nbrs in graph.adjacency]


def edge_betweenness(graph: AttributedGraph) -> dict[tuple[int, int], float]:
    """Betweenness score for every edge of ``graph``."""
    return edge_betweenness_adj(_plain_adjacency(graph))


def node_betweenness(graph: AttributedGraph) -> dict[int, float]:
    """Betweenness score for every node of ``graph``."""
    values = node_betweenness_values(_plain_adjacency(graph))
    return {u: values[u] for u in range(graph.num_nodes)}

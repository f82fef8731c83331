"""Independent brute-force references used only by tests.

These deliberately avoid the library's own algorithms: betweenness comes
from explicit enumeration of every shortest path, and the linear
separator search scans a dense grid of directions. Slow, tiny-input only.
"""

from collections import deque
from itertools import combinations

import numpy as np


def _adjacency(graph):
    return [[v for v, _ in nbrs] for nbrs in graph.adjacency]


def _all_shortest_paths(adj, s, t):
    """Every shortest s-t path, as node lists; [] if unreachable."""
    n = len(adj)
    dist = [-1] * n
    preds = [[] for _ in range(n)]
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
            if dist[v] == dist[u] + 1:
                preds[v].append(u)
    if dist[t] < 0:
        return []
    paths = []

    def walk(v, tail):
        if v == s:
            paths.append([s] + tail)
            return
        for p in preds[v]:
            walk(p, [v] + tail)

    walk(t, [])
    return paths


def naive_node_betweenness(graph):
    """Path-enumeration node betweenness; endpoints excluded, pairs once."""
    adj = _adjacency(graph)
    scores = {u: 0.0 for u in range(graph.num_nodes)}
    for s, t in combinations(range(graph.num_nodes), 2):
        paths = _all_shortest_paths(adj, s, t)
        if not paths:
            continue
        w = 1.0 / len(paths)
        for path in paths:
            for v in path[1:-1]:
                scores[v] += w
    return scores


def naive_edge_betweenness(graph):
    """Path-enumeration edge betweenness; pairs counted once."""
    adj = _adjacency(graph)
    scores = {e: 0.0 for e in graph.edges}
    for s, t in combinations(range(graph.num_nodes), 2):
        paths = _all_shortest_paths(adj, s, t)
        if not paths:
            continue
        w = 1.0 / len(paths)
        for path in paths:
            for a, b in zip(path, path[1:]):
                scores[(a, b) if a < b else (b, a)] += w
    return scores


def best_linear_accuracy(X, y, angles=3600):
    """Best training accuracy of any 2-D linear separator, by angle grid."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    assert X.shape[1] == 2
    best = 0.0
    for k in range(angles):
        theta = np.pi * k / angles
        w = np.array([np.cos(theta), np.sin(theta)])
        proj = X @ w
        order = np.argsort(proj)
        sorted_y = y[order]
        # sweep every threshold between consecutive projections
        for cut in range(len(proj) + 1):
            left, right = sorted_y[:cut], sorted_y[cut:]
            for lo, hi in ((0, 1), (1, 0)):
                acc = (np.sum(left == lo) + np.sum(right == hi)) / len(y)
                best = max(best, float(acc))
    return 100.0 * best

"""Uniform stochastic sampling of connected graphlets.

Each of M restarts starts from a uniform random node and grows an edge
set for up to T steps. A step picks a uniform random visited node that
still has an unused incident edge, then a uniform random such edge; the
accumulated edge set after every step is emitted as one graphlet. A
restart whose visited nodes have no unused incident edges left ends
early, so a run emits at most M*T graphlets and exactly M*T when the
graph never runs dry.

Randomness comes from :class:`random.Random` (CPython's Mersenne Twister,
MT19937), seeded explicitly, which makes output lists reproducible across
runs and platforms for a given (graph, M, T, seed).
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from .errors import ParameterError
from .graph import AttributedGraph, Graphlet

__all__ = ["SamplerParams", "sample_graphlets"]


@dataclass(frozen=True)
class SamplerParams:
    """M restarts, graphlets of at most T edges, explicit RNG seed."""

    M: int = 10000
    T: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.M < 1:
            raise ParameterError("M must be >= 1")
        if self.T < 1:
            raise ParameterError("T must be >= 1")


def incident_edge_ids(graph: AttributedGraph) -> list[list[int]]:
    """Per-node edge-id lists, the form the walk loop consumes."""
    return [[eid for (_, eid) in nbrs] for nbrs in graph.adjacency]


def walk_edge_sets(graph: AttributedGraph, params: SamplerParams):
    """Generate the raw walk emissions as growing edge-id lists.

    Yields one ``(size, edge_ids)`` pair per growth step; ``edge_ids`` is
    the accumulated list in insertion order and must not be mutated by the
    consumer. The RNG call sequence is fixed (start node, visited-node
    pick, edge pick per step), so every consumer of a given
    (graph, M, T, seed) sees the same stream.
    """
    rng = random.Random(params.seed)
    randrange = rng.randrange
    incident = incident_edge_ids(graph)
    edges = graph.edges
    n = graph.num_nodes
    m = graph.num_edges
    for _ in range(params.M):
        visited = [randrange(n)]
        in_walk = bytearray(n)
        in_walk[visited[0]] = 1
        used = bytearray(m)
        acc: list[int] = []
        for t in range(1, params.T + 1):
            eligible = [u for u in visited
                        if any(not used[e] for e in incident[u])]
            if not eligible:
                break
            u = eligible[randrange(len(eligible))]
            unused = [e for e in incident[u] if not used[e]]
            eid = unused[randrange(len(unused))]
            a, b = edges[eid]
            v = b if a == u else a
            if not in_walk[v]:
                visited.append(v)
                in_walk[v] = 1
            used[eid] = 1
            acc.append(eid)
            yield t, acc


def sample_graphlets(graph: AttributedGraph, params: SamplerParams) -> list[Graphlet]:
    """Sample graphlets from ``graph``; output order is seed-deterministic."""
    if graph.num_edges == 0:
        warnings.warn("graph has no edges; nothing to sample", stacklevel=2)
        return []
    edges = graph.edges
    return [Graphlet(graph, [edges[e] for e in acc])
            for _, acc in walk_edge_sets(graph, params)]

"""Brute-force references for tests and audits.

Everything here is exponential-time by design and guarded to tiny sizes:
exact isomorphism by backtracking, exhaustive enumeration of connected
graphs up to six edges, and the exact per-size distribution of the
two-stage uniform sampling walk. Production code paths never import this
module; tests, audits and the ``inspect`` command do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial

from .errors import ParameterError
from .graph import AttributedGraph, Graphlet

_ISO_NODE_GUARD = 12


def _local_form(g):
    """Normalize a Graphlet or AttributedGraph to nodes 0..n-1."""
    if isinstance(g, Graphlet):
        index = {u: i for i, u in enumerate(g.nodes)}
        edges = frozenset((min(index[u], index[v]), max(index[u], index[v]))
                          for (u, v) in g.edges)
        node_labels = [g.node_label(u) for u in g.nodes]
        edge_labels = {(min(index[u], index[v]), max(index[u], index[v])): g.edge_label(u, v)
                       for (u, v) in g.edges}
        return len(g.nodes), edges, node_labels, edge_labels
    return (g.num_nodes, frozenset(g.edges), list(g.node_labels),
            dict(g.edge_labels))


def is_isomorphic(g1, g2, ignore_labels: bool = False) -> bool:
    """Exact isomorphism test between two small graphs or graphlets.

    Bijections must preserve node and edge labels unless ``ignore_labels``
    is set. Guarded to graphs of at most 12 nodes.
    """
    n1, e1, nl1, el1 = _local_form(g1)
    n2, e2, nl2, el2 = _local_form(g2)
    if n1 > _ISO_NODE_GUARD or n2 > _ISO_NODE_GUARD:
        raise ParameterError("isomorphism oracle is limited to <= 12 nodes")
    if n1 != n2 or len(e1) != len(e2):
        return False

    def degs(n, edges):
        d = [0] * n
        for (u, v) in edges:
            d[u] += 1
            d[v] += 1
        return d

    d1, d2 = degs(n1, e1), degs(n2, e2)
    if sorted(d1) != sorted(d2):
        return False
    if not ignore_labels:
        if sorted(map(repr, nl1)) != sorted(map(repr, nl2)):
            return False
        if sorted(repr(l) for l in el1.values()) != sorted(repr(l) for l in el2.values()):
            return False

    adj1 = [set() for _ in range(n1)]
    for (u, v) in e1:
        adj1[u].add(v)
        adj1[v].add(u)
    adj2 = [set() for _ in range(n2)]
    for (u, v) in e2:
        adj2[u].add(v)
        adj2[v].add(u)

    order = sorted(range(n1), key=lambda u: -d1[u])
    mapping = [-1] * n1
    used = [False] * n2

    def feasible(u, w):
        if d1[u] != d2[w]:
            return False
        if not ignore_labels and nl1[u] != nl2[w]:
            return False
        for p in adj1[u]:
            q = mapping[p]
            if q >= 0:
                if q not in adj2[w]:
                    return False
                if not ignore_labels:
                    ke1 = (min(u, p), max(u, p))
                    ke2 = (min(w, q), max(w, q))
                    if el1[ke1] != el2[ke2]:
                        return False
        # both-ways consistency: w may not touch mapped nodes u does not
        mapped_nbrs_w = sum(1 for q in adj2[w] if used[q])
        mapped_nbrs_u = sum(1 for p in adj1[u] if mapping[p] >= 0)
        return mapped_nbrs_u == mapped_nbrs_w

    def backtrack(i):
        if i == len(order):
            return True
        u = order[i]
        for w in range(n2):
            if used[w] or not feasible(u, w):
                continue
            mapping[u] = w
            used[w] = True
            if backtrack(i + 1):
                return True
            mapping[u] = -1
            used[w] = False
        return False

    return backtrack(0)


@dataclass(frozen=True)
class IsoClass:
    """One isomorphism class of connected unlabeled graphs."""

    rep: AttributedGraph
    t: int
    labeled_count: int  # distinct labeled copies on the class's own node set


@dataclass
class IsoPairUniverse:
    """All connected unlabeled graphs up to an edge bound, by class."""

    max_edges: int
    classes: list[IsoClass] = field(default_factory=list)

    def classes_with(self, t: int) -> list[tuple[int, IsoClass]]:
        return [(i, c) for i, c in enumerate(self.classes) if c.t == t]

    def classify(self, g) -> int:
        """Index of the class structurally isomorphic to ``g``."""
        n, edges, _, _ = _local_form(g)
        t = len(edges)
        for i, c in enumerate(self.classes):
            if c.t == t and c.rep.num_nodes == n and is_isomorphic(
                    c.rep, g, ignore_labels=True):
                return i
        raise LookupError(f"no class for graph with {n} nodes, {t} edges")


def _automorphism_count(graph: AttributedGraph) -> int:
    edges = set(graph.edges)
    n = graph.num_nodes
    count = 0
    for perm in permutations(range(n)):
        ok = True
        for (u, v) in edges:
            pu, pv = perm[u], perm[v]
            if (min(pu, pv), max(pu, pv)) not in edges:
                ok = False
                break
        if ok:
            count += 1
    return count


def enumerate_connected(max_edges: int) -> IsoPairUniverse:
    """Every connected graph with 1..max_edges edges, one rep per class.

    Children are generated from each smaller representative by adding one
    edge between existing nodes or one pendant node; every connected graph
    with ``t`` edges contains a connected subgraph with ``t - 1`` edges, so
    this covers all classes.
    """
    if not (1 <= max_edges <= 6):
        raise ParameterError("enumeration is limited to max_edges in 1..6")
    universe = IsoPairUniverse(max_edges=max_edges)
    single = AttributedGraph(2, [(0, 1)])
    per_size: dict[int, list[AttributedGraph]] = {1: [single]}
    for t in range(2, max_edges + 1):
        reps: list[AttributedGraph] = []
        buckets: dict[tuple, list[AttributedGraph]] = {}

        def consider(n, edges):
            cand = AttributedGraph(n, edges)
            deg = [0] * n
            for (u, v) in edges:
                deg[u] += 1
                deg[v] += 1
            key = (n, tuple(sorted(deg)))
            for known in buckets.get(key, ()):
                if is_isomorphic(known, cand, ignore_labels=True):
                    return
            buckets.setdefault(key, []).append(cand)
            reps.append(cand)

        for parent in per_size[t - 1]:
            n = parent.num_nodes
            existing = set(parent.edges)
            for u, v in combinations(range(n), 2):
                if (u, v) not in existing:
                    consider(n, list(parent.edges) + [(u, v)])
            for u in range(n):
                consider(n + 1, list(parent.edges) + [(u, n)])
        per_size[t] = reps
    for t in range(1, max_edges + 1):
        for rep in per_size[t]:
            n = rep.num_nodes
            universe.classes.append(IsoClass(
                rep=rep, t=t,
                labeled_count=factorial(n) // _automorphism_count(rep)))
    return universe


def exact_walk_distribution(graph: AttributedGraph, T: int,
                            universe: IsoPairUniverse | None = None,
                            ) -> dict[int, dict[int, float]]:
    """Exact per-size class distribution of the sampling walk.

    Dynamic program over connected edge subsets: a restart starts on a
    uniform node, then repeatedly picks a uniform visited node that still
    has an unused incident edge and a uniform such edge. The distribution
    at size ``t`` is conditioned on the walk surviving to step ``t``,
    matching how empirical per-size histograms are normalized.

    Returns ``{t: {class_index: probability}}`` with class indices into
    ``universe`` (default: ``enumerate_connected(T)``).
    """
    if graph.num_nodes > 10 or T > 4:
        raise ParameterError("walk oracle is limited to <= 10 nodes, T <= 4")
    if universe is None:
        universe = enumerate_connected(T)
    adj = graph.adjacency
    edges = graph.edges
    n = graph.num_nodes

    states: dict[frozenset, float] = {}
    for u in range(n):
        d = len(adj[u])
        if d == 0:
            continue
        share = 1.0 / n / d
        for (_, eid) in adj[u]:
            key = frozenset((eid,))
            states[key] = states.get(key, 0.0) + share

    class_memo: dict[frozenset, int] = {}

    def project(level_states):
        total = sum(level_states.values())
        out: dict[int, float] = {}
        for key, p in level_states.items():
            idx = class_memo.get(key)
            if idx is None:
                g = Graphlet(graph, [edges[eid] for eid in key])
                idx = universe.classify(g)
                class_memo[key] = idx
            out[idx] = out.get(idx, 0.0) + p
        return {idx: p / total for idx, p in out.items()} if total > 0 else {}

    result = {1: project(states)}
    for t in range(2, T + 1):
        nxt: dict[frozenset, float] = {}
        for key, p in states.items():
            endpoints = set()
            for eid in key:
                u, v = edges[eid]
                endpoints.add(u)
                endpoints.add(v)
            eligible = [u for u in endpoints
                        if any(eid not in key for (_, eid) in adj[u])]
            if not eligible:
                continue  # dead end: the restart terminates here
            pu = p / len(eligible)
            for u in eligible:
                unused = [eid for (_, eid) in adj[u] if eid not in key]
                pe = pu / len(unused)
                for eid in unused:
                    key2 = key | {eid}
                    nxt[key2] = nxt.get(key2, 0.0) + pe
        states = nxt
        result[t] = project(states)
    return result

import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hsge.graph import AttributedGraph, Label


@pytest.fixture
def triangle():
    return AttributedGraph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    return AttributedGraph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star3():
    return AttributedGraph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def four_cycle():
    return AttributedGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def two_triangles_bridge():
    # triangles {0,1,2} and {3,4,5} joined by the bridge (2,3)
    return AttributedGraph(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_connected_graph(rng: random.Random, n: int,
                           extra_edges: int = 0,
                           symbols=None) -> AttributedGraph:
    """Random spanning tree plus extra random edges; always connected."""
    edges = set()
    nodes = list(range(n))
    rng.shuffle(nodes)
    for i in range(1, n):
        u = nodes[rng.randrange(i)]
        v = nodes[i]
        edges.add((min(u, v), max(u, v)))
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 50 * (extra_edges + 1):
        u, v = rng.randrange(n), rng.randrange(n)
        attempts += 1
        if u != v:
            edges.add((min(u, v), max(u, v)))
    node_labels = None
    if symbols:
        node_labels = [Label(symbols=(rng.choice(symbols),)) for _ in range(n)]
    return AttributedGraph(n, sorted(edges), node_labels=node_labels)


def make_class_graph(rng: random.Random, cls: int, labeled: bool = False):
    """Two structurally distinct families: chorded cycles vs double stars."""
    if cls == 0:
        n = rng.randrange(8, 13)
        edges = [(i, (i + 1) % n) for i in range(n)]
        for _ in range(2):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and abs(u - v) not in (1, n - 1):
                edges.append((min(u, v), max(u, v)))
        edges = sorted({(min(u, v), max(u, v)) for (u, v) in edges})
    else:
        n = rng.randrange(8, 13)
        edges = [(0, 1)]
        for leaf in range(2, n):
            edges.append((rng.randrange(2), leaf))
        edges = sorted(set(edges))
    node_labels = None
    if labeled:
        node_labels = [Label(symbols=(rng.choice("AB"),)) for _ in range(n)]
    return AttributedGraph(n, edges, node_labels=node_labels)


def synthetic_dataset(n_per_class: int = 12, seed: int = 0,
                      labeled: bool = False):
    rng = random.Random(seed)
    graphs, labels = [], []
    for cls in (0, 1):
        for _ in range(n_per_class):
            graphs.append(make_class_graph(rng, cls, labeled=labeled))
            labels.append(cls)
    order = list(range(len(graphs)))
    rng.shuffle(order)
    return ([graphs[i] for i in order],
            np.asarray([labels[i] for i in order], dtype=int))


def write_tud(root: Path, name: str, graphs, labels,
              with_node_labels: bool = False) -> Path:
    """Write graphs in the community text layout (edges both directions)."""
    directory = root / name
    directory.mkdir(parents=True, exist_ok=True)
    indicator, adjacency, node_label_rows = [], [], []
    offset = 0
    for gid, g in enumerate(graphs, start=1):
        for u in range(g.num_nodes):
            indicator.append(str(gid))
            lab = g.node_labels[u].symbols
            node_label_rows.append(lab[0] if lab else "0")
        for (u, v) in g.edges:
            adjacency.append(f"{u + 1 + offset}, {v + 1 + offset}")
            adjacency.append(f"{v + 1 + offset}, {u + 1 + offset}")
        offset += g.num_nodes
    (directory / f"{name}_A.txt").write_text("\n".join(adjacency) + "\n")
    (directory / f"{name}_graph_indicator.txt").write_text(
        "\n".join(indicator) + "\n")
    (directory / f"{name}_graph_labels.txt").write_text(
        "\n".join(str(int(l)) for l in labels) + "\n")
    if with_node_labels:
        (directory / f"{name}_node_labels.txt").write_text(
            "\n".join(node_label_rows) + "\n")
    return directory


@pytest.fixture
def synthetic_tud(tmp_path):
    graphs, labels = synthetic_dataset(n_per_class=12, seed=7)
    write_tud(tmp_path, "SYNTH", graphs, labels)
    manifest = tmp_path / "synth.toml"
    manifest.write_text('name = "SYNTH"\nformat = "tud"\ndir = "SYNTH"\n')
    return tmp_path, manifest

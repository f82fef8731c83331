"""Dataset loading and artifact persistence.

Three dataset layouts load into the in-memory graph model:

* ``tud``: the community text layout (adjacency file, graph-indicator
  file, graph-labels file, optional node/edge label and attribute files).
* ``gxl-cxl``: XML graph files plus cxl index files carrying class labels
  and the predefined train/validation/test split.
* ``json``: this package's own JSON graph format.

Artifacts (embeddings, vocabularies, hierarchies, reports) persist in
versioned formats that round-trip exactly; loading a file with the wrong
version tag fails loudly instead of guessing.
"""

from __future__ import annotations

import json
import os
import sys
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .embedding import OVERFLOW_BIN
from .errors import FormatVersionError, ParameterError, ParseError
from .graph import UNLABELED, AttributedGraph, HierarchicalGraph, Label
from .hashing import GraphletVocabulary

__all__ = [
    "DatasetManifest", "LoadedDataset", "load_manifest", "load_dataset",
    "resolve_data_dir", "load_tud", "load_gxl_cxl",
    "load_json_graphs", "save_json_graphs",
    "save_embeddings_csv", "save_embeddings_bin", "load_embeddings_bin",
    "save_vocabulary", "load_vocabulary",
    "hierarchy_to_json", "hierarchy_from_json",
    "save_report", "load_report", "dataset_statistics",
]

DATA_DIR_ENV = "HSGE_DATA_DIR"

EMBEDDING_BIN_MAGIC = b"HSGEEMB1"
JSON_GRAPHS_FORMAT = "hsge-graphs"
JSON_GRAPHS_VERSION = 1
HIERARCHY_FORMAT = "hsge-hierarchy"
HIERARCHY_VERSION = 1
REPORT_VERSION = 1


def resolve_data_dir(flag_value: Optional[str] = None) -> Path:
    """Dataset root: explicit flag, then HSGE_DATA_DIR, then ./data."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path("data")


@dataclass(frozen=True)
class DatasetManifest:
    """Where a dataset lives and how to read it."""

    name: str
    format: str  # tud | gxl-cxl | json
    dir: str = "."
    labeled: bool = True
    file: Optional[str] = None  # json format only
    train_cxl: str = "train.cxl"
    valid_cxl: str = "valid.cxl"
    test_cxl: str = "test.cxl"
    node_symbols: tuple[str, ...] = ()
    node_attributes: tuple[str, ...] = ()
    edge_symbols: tuple[str, ...] = ()
    edge_attributes: tuple[str, ...] = ()
    normalize_attributes: bool = True

    def __post_init__(self):
        if self.format not in ("tud", "gxl-cxl", "json"):
            raise ParameterError(f"unknown dataset format {self.format!r}")


@dataclass
class LoadedDataset:
    """Graphs plus class ids, class names, and the optional fixed split."""

    name: str
    graphs: list[AttributedGraph]
    y: np.ndarray
    class_names: list[str]
    split: Optional[tuple[list[int], list[int], list[int]]] = None
    labeled: bool = True
    report: dict = field(default_factory=dict)


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.exists():
        raise ParseError("manifest not found", path=path)
    try:
        if path.suffix == ".json":
            raw = json.loads(path.read_text())
        else:
            raw = tomllib.loads(path.read_text())
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ParseError(f"manifest does not parse: {exc}", path=path) from exc
    gxl = raw.pop("gxl", {})
    known = {
        "name": raw.get("name", path.stem),
        "format": raw.get("format", "tud"),
        "dir": raw.get("dir", "."),
        "labeled": bool(raw.get("labeled", True)),
        "file": raw.get("file"),
        "train_cxl": gxl.get("train", "train.cxl"),
        "valid_cxl": gxl.get("valid", "valid.cxl"),
        "test_cxl": gxl.get("test", "test.cxl"),
        "node_symbols": tuple(gxl.get("node_symbols", [])),
        "node_attributes": tuple(gxl.get("node_attributes", [])),
        "edge_symbols": tuple(gxl.get("edge_symbols", [])),
        "edge_attributes": tuple(gxl.get("edge_attributes", [])),
        "normalize_attributes": bool(gxl.get("normalize_attributes", True)),
    }
    return DatasetManifest(**known)


def load_dataset(manifest: DatasetManifest, data_dir=None) -> LoadedDataset:
    root = resolve_data_dir(data_dir) / manifest.dir
    if manifest.format == "tud":
        graphs, y, class_names = load_tud(root, name=manifest.name)
        return LoadedDataset(manifest.name, graphs, y, class_names,
                             labeled=manifest.labeled)
    if manifest.format == "gxl-cxl":
        graphs, y, class_names, split = load_gxl_cxl(root, manifest)
        return LoadedDataset(manifest.name, graphs, y, class_names,
                             split=split, labeled=manifest.labeled)
    path = root / (manifest.file or "graphs.json")
    graphs, y, class_names, split = load_json_graphs(path)
    return LoadedDataset(manifest.name, graphs, y, class_names,
                         split=split, labeled=manifest.labeled)


# ---------------------------------------------------------------- tud ----

def _read_lines(path: Path) -> list[str]:
    if not path.exists():
        raise ParseError("required file missing", path=path)
    return path.read_text().splitlines()


def load_tud(directory, name: Optional[str] = None):
    """Load a dataset in the community text layout.

    Node ids in the files are 1-indexed and global; they come out
    0-indexed and local to their graph. Both orientations of an edge are
    collapsed to one undirected edge.
    """
    directory = Path(directory)
    if name is None or not (directory / f"{name}_A.txt").exists():
        candidates = sorted(directory.glob("*_A.txt"))
        if not candidates:
            raise ParseError("no *_A.txt adjacency file found", path=directory)
        name = candidates[0].name[:-len("_A.txt")]
    prefix = directory / name

    indicator = []
    for ln, line in enumerate(_read_lines(Path(f"{prefix}_graph_indicator.txt")), 1):
        line = line.strip()
        if not line:
            continue
        try:
            indicator.append(int(line))
        except ValueError as exc:
            raise ParseError("bad graph id", path=f"{prefix}_graph_indicator.txt",
                             line=ln) from exc
    num_graphs = max(indicator)
    if sorted(set(indicator)) != list(range(1, num_graphs + 1)):
        raise ParseError("graph indicator ids are not 1..N",
                         path=f"{prefix}_graph_indicator.txt")

    # node id -> (graph, local index)
    local_index = []
    counts = [0] * (num_graphs + 1)
    for gid in indicator:
        local_index.append(counts[gid])
        counts[gid] += 1

    labels_path = Path(f"{prefix}_graph_labels.txt")
    raw_labels = [line.strip() for line in _read_lines(labels_path) if line.strip()]
    if len(raw_labels) != num_graphs:
        raise ParseError(f"expected {num_graphs} graph labels, found "
                         f"{len(raw_labels)}", path=labels_path)
    class_names = sorted(set(raw_labels), key=lambda s: (len(s), s))
    class_id = {c: i for i, c in enumerate(class_names)}
    y = np.asarray([class_id[c] for c in raw_labels], dtype=int)

    def optional_column(suffix):
        path = Path(f"{prefix}_{suffix}.txt")
        if not path.exists():
            return None
        return [line.strip() for line in path.read_text().splitlines()]

    node_label_rows = optional_column("node_labels")
    node_attr_rows = optional_column("node_attributes")

    node_labels_per_graph: list[list[Label]] = [
        [UNLABELED] * counts[g + 1] for g in range(num_graphs)]
    for node_id, gid in enumerate(indicator):
        symbols = ()
        attributes = ()
        if node_label_rows is not None:
            if node_id >= len(node_label_rows):
                raise ParseError("fewer node labels than nodes",
                                 path=f"{prefix}_node_labels.txt")
            symbols = (node_label_rows[node_id],)
        if node_attr_rows is not None and node_id < len(node_attr_rows) \
                and node_attr_rows[node_id]:
            attributes = tuple(float(x) for x in
                               node_attr_rows[node_id].split(","))
        if symbols or attributes:
            node_labels_per_graph[gid - 1][local_index[node_id]] = Label(
                symbols=symbols, attributes=attributes)

    edge_label_rows = optional_column("edge_labels")
    edge_attr_rows = optional_column("edge_attributes")

    edges_per_graph: list[dict[tuple[int, int], Label]] = [
        {} for _ in range(num_graphs)]
    adjacency_path = Path(f"{prefix}_A.txt")
    edge_row = -1
    for ln, line in enumerate(_read_lines(adjacency_path), 1):
        line = line.strip()
        if not line:
            continue
        edge_row += 1
        try:
            a_str, b_str = line.split(",")
            a, b = int(a_str), int(b_str)
        except ValueError as exc:
            raise ParseError("expected 'u, v'", path=adjacency_path,
                             line=ln) from exc
        if not (1 <= a <= len(indicator) and 1 <= b <= len(indicator)):
            raise ParseError(f"node id out of range in edge ({a},{b})",
                             path=adjacency_path, line=ln)
        ga, gb = indicator[a - 1], indicator[b - 1]
        if ga != gb:
            raise ParseError(f"edge ({a},{b}) crosses graphs {ga} and {gb}",
                             path=adjacency_path, line=ln)
        if a == b:
            continue  # self-loops are dropped
        u, v = local_index[a - 1], local_index[b - 1]
        e = (u, v) if u < v else (v, u)
        label = UNLABELED
        symbols = ()
        attributes = ()
        if edge_label_rows is not None and edge_row < len(edge_label_rows):
            symbols = (edge_label_rows[edge_row],)
        if edge_attr_rows is not None and edge_row < len(edge_attr_rows) \
                and edge_attr_rows[edge_row]:
            attributes = tuple(float(x) for x in
                               edge_attr_rows[edge_row].split(","))
        if symbols or attributes:
            label = Label(symbols=symbols, attributes=attributes)
        edges_per_graph[ga - 1].setdefault(e, label)

    graphs = []
    for g in range(num_graphs):
        edge_labels = edges_per_graph[g]
        graphs.append(AttributedGraph(
            counts[g + 1], list(edge_labels), node_labels=node_labels_per_graph[g],
            edge_labels=edge_labels))
    return graphs, y, class_names


# ------------------------------------------------------------ gxl/cxl ----

def _parse_gxl(path: Path, manifest: DatasetManifest) -> AttributedGraph:
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}", path=path) from exc
    graph_el = tree.getroot().find("graph")
    if graph_el is None:
        raise ParseError("no <graph> element", path=path)

    def attr_value(attr_el):
        for child in attr_el:
            tag = child.tag.lower()
            text = (child.text or "").strip()
            if tag in ("string", "enum"):
                return ("symbol", text)
            if tag in ("int", "integer", "float", "double"):
                return ("numeric", float(text))
        return (None, None)

    unknown: set[str] = set()

    def split_attrs(element, symbol_names, numeric_names):
        symbols = []
        numerics = []
        for attr_el in element.findall("attr"):
            name = attr_el.get("name", "")
            kind, value = attr_value(attr_el)
            if kind is None:
                unknown.add(name)
                continue
            if symbol_names or numeric_names:
                if name in symbol_names:
                    symbols.append((name, str(value)))
                elif name in numeric_names:
                    if kind != "numeric":
                        raise ParseError(
                            f"attribute {name!r} is not numeric", path=path)
                    numerics.append((name, float(value)))
                else:
                    unknown.add(name)
            elif kind == "symbol":
                symbols.append((name, str(value)))
            else:
                numerics.append((name, float(value)))
        symbols.sort()
        numerics.sort()
        return (tuple(s for _, s in symbols), tuple(v for _, v in numerics))

    node_ids = {}
    node_labels = []
    for node_el in graph_el.findall("node"):
        nid = node_el.get("id")
        if nid is None or nid in node_ids:
            raise ParseError(f"missing or duplicate node id {nid!r}", path=path)
        node_ids[nid] = len(node_ids)
        symbols, numerics = split_attrs(node_el, manifest.node_symbols,
                                        manifest.node_attributes)
        node_labels.append(Label(symbols=symbols, attributes=numerics))

    edge_labels: dict[tuple[int, int], Label] = {}
    for edge_el in graph_el.findall("edge"):
        try:
            u = node_ids[edge_el.get("from")]
            v = node_ids[edge_el.get("to")]
        except KeyError as exc:
            raise ParseError(f"edge references unknown node {exc}", path=path)
        if u == v:
            continue
        symbols, numerics = split_attrs(edge_el, manifest.edge_symbols,
                                        manifest.edge_attributes)
        e = (u, v) if u < v else (v, u)
        edge_labels.setdefault(e, Label(symbols=symbols, attributes=numerics))

    if unknown:
        warnings.warn(f"{path.name}: ignored unknown attributes "
                      f"{sorted(unknown)}", stacklevel=2)

    if manifest.normalize_attributes:
        node_labels = _normalize_positions(node_labels)
    return AttributedGraph(len(node_ids), list(edge_labels),
                           node_labels=node_labels, edge_labels=edge_labels)


def _normalize_positions(node_labels: list[Label]) -> list[Label]:
    """Per-graph zero-mean unit-variance scaling of numeric attributes."""
    vectors = [lab.attributes for lab in node_labels if lab.attributes]
    if not vectors or len({len(v) for v in vectors}) != 1:
        return node_labels
    arr = np.asarray(vectors, dtype=float)
    mean = arr.mean(axis=0)
    std = arr.std(axis=0)
    std[std == 0] = 1.0
    out = []
    for lab in node_labels:
        if lab.attributes:
            scaled = tuple((np.asarray(lab.attributes) - mean) / std)
            out.append(Label(symbols=lab.symbols, attributes=scaled))
        else:
            out.append(lab)
    return out


def _parse_cxl(path: Path) -> list[tuple[str, str]]:
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}", path=path) from exc
    prints = []
    for el in tree.getroot().iter("print"):
        f, c = el.get("file"), el.get("class")
        if f is None or c is None:
            raise ParseError("print element without file/class", path=path)
        prints.append((f, c))
    if not prints:
        raise ParseError("no print entries", path=path)
    return prints


def load_gxl_cxl(directory, manifest: DatasetManifest):
    """Load an XML dataset: graphs, class ids, class names, fixed split."""
    directory = Path(directory)
    parts = []
    for cxl in (manifest.train_cxl, manifest.valid_cxl, manifest.test_cxl):
        path = directory / cxl
        if not path.exists():
            # some releases ship validation.cxl instead of valid.cxl
            alt = directory / cxl.replace("valid", "validation")
            if alt.exists():
                path = alt
            else:
                raise ParseError("cxl index missing", path=path)
        parts.append(_parse_cxl(path))
    graphs = []
    raw_classes = []
    split: tuple[list[int], list[int], list[int]] = ([], [], [])
    for part_idx, prints in enumerate(parts):
        for fname, cls in prints:
            split[part_idx].append(len(graphs))
            graphs.append(_parse_gxl(directory / fname, manifest))
            raw_classes.append(cls)
    class_names = sorted(set(raw_classes))
    class_id = {c: i for i, c in enumerate(class_names)}
    y = np.asarray([class_id[c] for c in raw_classes], dtype=int)
    return graphs, y, class_names, split


# ------------------------------------------------------- json graphs ----

def _label_to_json(label: Label):
    return {"symbols": list(label.symbols), "attributes": list(label.attributes)}


def _label_from_json(obj) -> Label:
    return Label(symbols=tuple(obj.get("symbols", ())),
                 attributes=tuple(float(x) for x in obj.get("attributes", ())))


def _graph_to_json(graph: AttributedGraph) -> dict:
    return {
        "num_nodes": graph.num_nodes,
        "nodes": [_label_to_json(l) for l in graph.node_labels],
        "edges": [[u, v, _label_to_json(graph.edge_labels[(u, v)])]
                  for (u, v) in graph.edges],
        "origins": [list(o) for o in graph.node_origins]
                   if graph.node_origins else None,
    }


def _graph_from_json(obj) -> AttributedGraph:
    edges = [(e[0], e[1]) for e in obj["edges"]]
    edge_labels = {(e[0], e[1]): _label_from_json(e[2]) for e in obj["edges"]}
    origins = [tuple(o) for o in obj["origins"]] if obj.get("origins") else None
    return AttributedGraph(obj["num_nodes"], edges,
                           node_labels=[_label_from_json(n) for n in obj["nodes"]],
                           edge_labels=edge_labels, node_origins=origins)


def save_json_graphs(path, graphs: Sequence[AttributedGraph], y=None,
                     class_names=None, split=None) -> None:
    doc = {
        "format": JSON_GRAPHS_FORMAT,
        "version": JSON_GRAPHS_VERSION,
        "graphs": [_graph_to_json(g) for g in graphs],
        "class_labels": [int(c) for c in y] if y is not None else None,
        "class_names": list(class_names) if class_names else None,
        "split": [list(map(int, part)) for part in split] if split else None,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True))


def load_json_graphs(path):
    path = Path(path)
    if not path.exists():
        raise ParseError("json dataset missing", path=path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}", path=path) from exc
    if doc.get("format") != JSON_GRAPHS_FORMAT or \
            doc.get("version") != JSON_GRAPHS_VERSION:
        raise FormatVersionError(
            f"{path}: expected {JSON_GRAPHS_FORMAT} v{JSON_GRAPHS_VERSION}")
    graphs = [_graph_from_json(g) for g in doc["graphs"]]
    y = np.asarray(doc["class_labels"] or [0] * len(graphs), dtype=int)
    class_names = doc.get("class_names") or [str(c) for c in sorted(set(y))]
    split = tuple(doc["split"]) if doc.get("split") else None
    return graphs, y, class_names, split


# -------------------------------------------------------- embeddings ----

def _format_float(x: float) -> str:
    return repr(float(x))


def save_embeddings_csv(path, matrix: np.ndarray, layout, config: dict) -> None:
    """CSV with one row per graph; the header names every layout column."""
    names = [f"{desc}/t{t}/" + ("overflow" if b == OVERFLOW_BIN else f"b{b}")
             for (desc, t, b) in layout]
    lines = ["# hsge-embeddings 1 config=" + json.dumps(config, sort_keys=True)]
    lines.append(",".join(["graph"] + names))
    for i, row in enumerate(np.asarray(matrix)):
        lines.append(",".join([str(i)] + [_format_float(x) for x in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def save_embeddings_bin(path, matrix: np.ndarray, layout, config: dict) -> None:
    """Compact binary: magic, JSON header (layout + config), raw float64."""
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    header = json.dumps({
        "version": 1,
        "shape": list(matrix.shape),
        "dtype": "float64",
        "layout": [[desc, t, b] for (desc, t, b) in layout],
        "config": config,
    }, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(EMBEDDING_BIN_MAGIC)
        fh.write(len(header).to_bytes(8, "little"))
        fh.write(header)
        fh.write(matrix.tobytes())


def load_embeddings_bin(path):
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(len(EMBEDDING_BIN_MAGIC))
        if magic != EMBEDDING_BIN_MAGIC:
            raise FormatVersionError(f"{path}: not an embedding file")
        header_len = int.from_bytes(fh.read(8), "little")
        try:
            header = json.loads(fh.read(header_len).decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"bad embedding header: {exc}", path=path) from exc
        if header.get("version") != 1:
            raise FormatVersionError(f"{path}: unsupported embedding version")
        shape = tuple(header["shape"])
        expected = int(np.prod(shape)) * 8
        payload = fh.read()
        if len(payload) != expected:
            raise ParseError(
                f"truncated payload: {len(payload)} of {expected} bytes",
                path=path)
    matrix = np.frombuffer(payload, dtype=np.float64).reshape(shape).copy()
    layout = tuple((d, int(t), int(b)) for d, t, b in header["layout"])
    return matrix, layout, header["config"]


def save_vocabulary(path, vocab: GraphletVocabulary, config: dict = None) -> None:
    lines = vocab.to_lines()
    if config is not None:
        lines.insert(1, "# config=" + json.dumps(config, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n")


def load_vocabulary(path) -> GraphletVocabulary:
    path = Path(path)
    if not path.exists():
        raise ParseError("vocabulary file missing", path=path)
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    return GraphletVocabulary.from_lines(lines, source=str(path))


# -------------------------------------------------------- hierarchies ----

def hierarchy_to_json(hierarchy: HierarchicalGraph) -> dict:
    """Hierarchy as JSON; node identity is the (level, local index) pair."""
    return {
        "format": HIERARCHY_FORMAT,
        "version": HIERARCHY_VERSION,
        "levels": [_graph_to_json(g) for g in hierarchy.levels],
        "cluster_of": [list(c) for c in hierarchy.cluster_of],
        "hierarchical_edges": [[list(a), list(b)]
                               for (a, b) in hierarchy.hierarchical_edges],
    }


def hierarchy_from_json(doc: dict) -> HierarchicalGraph:
    if doc.get("format") != HIERARCHY_FORMAT or \
            doc.get("version") != HIERARCHY_VERSION:
        raise FormatVersionError(
            f"expected {HIERARCHY_FORMAT} v{HIERARCHY_VERSION}")
    return HierarchicalGraph([_graph_from_json(g) for g in doc["levels"]],
                             [tuple(c) for c in doc["cluster_of"]])


# ------------------------------------------------------------ reports ----

def save_report(path, report_dict: dict) -> None:
    if report_dict.get("version") != REPORT_VERSION:
        raise FormatVersionError("report dict carries no supported version")
    Path(path).write_text(json.dumps(report_dict, sort_keys=True, indent=2)
                          + "\n")


def load_report(path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad report JSON: {exc}", path=path) from exc
    if doc.get("version") != REPORT_VERSION:
        raise FormatVersionError(f"{path}: unsupported report version")
    return doc


def dataset_statistics(graphs, y) -> dict:
    """Counts used for loader sanity checks and the inspect command."""
    return {
        "graphs": len(graphs),
        "classes": int(len(np.unique(y))),
        "avg_nodes": float(np.mean([g.num_nodes for g in graphs])),
        "avg_edges": float(np.mean([g.num_edges for g in graphs])),
    }

"""Graphlet-distribution embeddings of graphs and graph hierarchies.

A plain embedding concatenates per-size histogram blocks of hashed
graphlets sampled from one graph. The hierarchical variants concatenate
that embedding over several views of a hierarchy, in a fixed order:
level graphs first, then compressed level slices (hierarchical edges
included, carrying their reserved label), then level unions. Five modes
select which views participate:

========================  ==========================================
baseline                  base graph only (identical to ``sge``)
pyramidal                 level graphs 0..K
generalized_pyramidal     levels plus unions of up to k2+1 levels
hierarchical              levels plus slices spanning up to k1 levels
exhaustive                levels, slices and unions
========================  ==========================================

Every block samples with a seed derived from (run seed, block
descriptor), so blocks are independent but the whole vector is
reproducible and block layouts align across graphs.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import AttributedGraph, HierarchicalGraph, level_slice, level_union
from .hashing import GraphletVocabulary, Histogram, accumulate_histogram
from .sampling import SamplerParams, sample_graphlets

__all__ = ["EmbeddingConfig", "EmbeddingVector", "MODES", "sge", "hsge",
           "block_descriptors", "block_graph", "collect_block_histograms",
           "vectorize_blocks", "derive_seed"]

MODES = ("baseline", "pyramidal", "generalized_pyramidal", "hierarchical",
         "exhaustive")

#: Marker for the whole-graph block used by the plain embedding.
BASE_DESC = "g"

OVERFLOW_BIN = -1


@dataclass(frozen=True)
class EmbeddingConfig:
    """Which hierarchy views to embed.

    K: highest level used. k1: largest slice span. k2: largest union span.
    """

    mode: str = "baseline"
    K: int = 0
    k1: int = 0
    k2: int = 0
    normalization: str = "l1"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.normalization not in ("l1", "raw"):
            raise ParameterError("normalization must be 'l1' or 'raw'")
        if min(self.K, self.k1, self.k2) < 0:
            raise ParameterError("K, k1, k2 must be non-negative")
        m = self.mode
        if m == "baseline" and (self.K, self.k1, self.k2) != (0, 0, 0):
            raise ParameterError("baseline forces K = k1 = k2 = 0")
        if m != "baseline" and self.K < 1:
            raise ParameterError(f"{m} needs K >= 1")
        if m == "pyramidal" and (self.k1, self.k2) != (0, 0):
            raise ParameterError("pyramidal forces k1 = k2 = 0")
        if m == "generalized_pyramidal" and (self.k1 != 0 or self.k2 < 1):
            raise ParameterError("generalized_pyramidal forces k1 = 0, k2 >= 1")
        if m == "hierarchical" and (self.k2 != 0 or self.k1 < 1):
            raise ParameterError("hierarchical forces k2 = 0, k1 >= 1")
        if m == "exhaustive" and (self.k1 < 1 or self.k2 < 1):
            raise ParameterError("exhaustive needs k1 >= 1 and k2 >= 1")
        if self.k1 > self.K or self.k2 > self.K:
            raise ParameterError("k1 and k2 may not exceed K")


@dataclass(frozen=True)
class EmbeddingVector:
    """Flat vector plus, per coordinate, (block descriptor, size, bin)."""

    values: np.ndarray
    layout: tuple[tuple[str, int, int], ...]

    def column_names(self) -> list[str]:
        return [f"{desc}/t{t}/" + ("overflow" if b == OVERFLOW_BIN else f"b{b}")
                for (desc, t, b) in self.layout]

    def block(self, desc: str, t: int) -> np.ndarray:
        idx = [i for i, (d, s, _) in enumerate(self.layout)
               if d == desc and s == t]
        return self.values[idx]


def derive_seed(seed: int, *tags) -> int:
    """Stable 64-bit seed from a run seed and any number of tags."""
    text = repr((int(seed),) + tuple(str(t) for t in tags))
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def block_descriptors(config: EmbeddingConfig) -> list[str]:
    """Ordered block list: levels, then slices by span, then unions by span."""
    if config.mode == "baseline":
        return [BASE_DESC]
    descs = [f"level:{l}" for l in range(config.K + 1)]
    for k in range(1, config.k1 + 1):
        for i in range(config.K - k + 1):
            descs.append(f"slice:{i}-{i + k}")
    for k in range(1, config.k2 + 1):
        for i in range(config.K - k + 1):
            descs.append(f"union:{i}-{i + k}")
    return descs


_EMPTY_BLOCK = AttributedGraph(1, [])


def block_graph(hierarchy: HierarchicalGraph, desc: str,
                pad_missing_levels: bool = False) -> AttributedGraph:
    """The graph a block descriptor denotes within ``hierarchy``.

    With ``pad_missing_levels``, descriptors that reach past the stored
    top level (possible when construction stopped early on a one-node
    level) resolve to an edgeless placeholder, contributing zero blocks
    instead of raising.
    """
    if desc == BASE_DESC:
        return hierarchy.levels[0]
    kind, _, span = desc.partition(":")
    if kind == "level":
        lo = hi = int(span)
    else:
        a, _, b = span.partition("-")
        lo, hi = int(a), int(b)
    if hi > hierarchy.top_level:
        if pad_missing_levels:
            return _EMPTY_BLOCK
        raise ParameterError(
            f"block {desc!r} needs level {hi} but the hierarchy "
            f"stops at level {hierarchy.top_level}")
    if kind == "level":
        return hierarchy.levels[lo]
    if kind == "slice":
        return level_slice(hierarchy, lo, hi)
    if kind == "union":
        return level_union(hierarchy, lo, hi)
    raise ParameterError(f"unknown block descriptor {desc!r}")


def collect_block_histograms(hierarchy: HierarchicalGraph,
                             config: EmbeddingConfig,
                             params: SamplerParams,
                             labeled: bool = False,
                             pad_missing_levels: bool = False,
                             ) -> dict[str, Histogram]:
    """Sample every block of the configuration and count raw hash codes.

    This is the expensive half of an embedding; the result is independent
    of any vocabulary, so one collection can be re-vectorized under many
    vocabularies (e.g. one per cross-validation fold).
    """
    out: dict[str, Histogram] = {}
    scratch = GraphletVocabulary()  # building-phase sink, discarded
    for desc in block_descriptors(config):
        g = block_graph(hierarchy, desc, pad_missing_levels=pad_missing_levels)
        if desc == BASE_DESC:
            seed = params.seed
        else:
            seed = derive_seed(params.seed, desc)
        if g.num_edges == 0:
            out[desc] = Histogram()
            continue
        graphlets = sample_graphlets(
            g, SamplerParams(M=params.M, T=params.T, seed=seed))
        out[desc] = accumulate_histogram(graphlets, scratch, labeled=labeled)
    return out


def vectorize_blocks(block_hists: dict[str, Histogram],
                     descs: list[str],
                     vocab: GraphletVocabulary,
                     T: int,
                     normalization: str = "l1") -> EmbeddingVector:
    """Lay histogram blocks out against a vocabulary.

    Bins follow lexicographic code order; every (block, size) pair gets
    one extra overflow coordinate that collects codes outside the
    vocabulary. With L1 normalization each non-empty (block, size)
    sub-block sums to one.
    """
    values: list[float] = []
    layout: list[tuple[str, int, int]] = []
    for desc in descs:
        hist = block_hists.get(desc, Histogram())
        for t in range(1, T + 1):
            codes = vocab.codes(t)
            index = {code: i for i, code in enumerate(codes)}
            row = [0.0] * (len(codes) + 1)
            counter = hist.counts.get(t, {})
            for code, n in counter.items():
                i = index.get(code)
                if i is None:
                    row[-1] += n
                else:
                    row[i] += n
            row[-1] += hist.overflow.get(t, 0)
            if normalization == "l1":
                total = sum(row)
                if total > 0:
                    row = [x / total for x in row]
            values.extend(row)
            layout.extend((desc, t, b) for b in range(len(codes)))
            layout.append((desc, t, OVERFLOW_BIN))
    return EmbeddingVector(values=np.asarray(values, dtype=np.float64),
                           layout=tuple(layout))


def sge(graph: AttributedGraph, params: SamplerParams,
        vocab: GraphletVocabulary, labeled: bool = False,
        normalization: str = "l1") -> EmbeddingVector:
    """Embed one graph: sample, hash, and concatenate per-size blocks.

    While the vocabulary is still building, newly seen codes are added to
    it before vectorizing; against a finalized vocabulary, unseen codes
    fall into the overflow coordinates.
    """
    if graph.num_edges == 0:
        warnings.warn("embedding an edgeless graph yields the zero vector",
                      stacklevel=2)
        hist = Histogram()
    else:
        graphlets = sample_graphlets(graph, params)
        hist = accumulate_histogram(graphlets, vocab, labeled=labeled)
    return vectorize_blocks({BASE_DESC: hist}, [BASE_DESC], vocab,
                            params.T, normalization)


def hsge(hierarchy: HierarchicalGraph, config: EmbeddingConfig,
         params: SamplerParams, vocab: GraphletVocabulary,
         labeled: bool = False, pad_missing_levels: bool = False,
         ) -> EmbeddingVector:
    """Embed a hierarchy under the given configuration.

    Baseline mode returns exactly ``sge`` of the base graph. Other modes
    concatenate one ``sge``-style block per descriptor, each sampled with
    its own derived seed.
    """
    if config.mode == "baseline":
        return sge(hierarchy.levels[0], params, vocab, labeled=labeled,
                   normalization=config.normalization)
    if config.K > hierarchy.top_level and not pad_missing_levels:
        raise ParameterError(
            f"config uses K={config.K} but the hierarchy has "
            f"top level {hierarchy.top_level}")
    hists = collect_block_histograms(hierarchy, config, params,
                                     labeled=labeled,
                                     pad_missing_levels=pad_missing_levels)
    if not vocab.finalized:
        for hist in hists.values():
            for t, counter in hist.counts.items():
                for code in counter:
                    vocab.add(t, code)
    return vectorize_blocks(hists, block_descriptors(config), vocab,
                            params.T, config.normalization)

"""Dataset-scale orchestration: embed whole datasets and run the protocols.

Sampling is the expensive step, so it happens once per graph (seeded per
graph and per block) into raw code histograms; vocabularies and vector
layouts are then derived from those histograms as often as needed. In
cross-validation the vocabulary is rebuilt for every fold from that
fold's training graphs only, and codes appearing only in test graphs land
in the per-size overflow coordinates, so no test information reaches the
layout. Fixed-split datasets build the vocabulary on the training portion.

The repeat protocol reruns the whole pipeline with freshly derived
sampling seeds per repetition and reports mean and spread across
repetitions.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .classify import (DEFAULT_C_GRID, EvalReport, select_C,
                       stratified_folds, train_svm)
from .datasets import LoadedDataset
from .embedding import (EmbeddingConfig, block_descriptors,
                        collect_block_histograms, derive_seed,
                        vectorize_blocks)
from .errors import ParameterError
from .graph import AttributedGraph, HierarchicalGraph
from .hashing import GraphletVocabulary, discretize_attributes
from .hierarchy import HierarchyParams, build_hierarchy
from .sampling import SamplerParams

__all__ = ["RunConfig", "prepare_graphs", "build_hierarchies",
           "collect_dataset_histograms", "vocabulary_from", "matrix_from",
           "embed_dataset", "evaluate_dataset"]

_MODE_SPANS = {  # (k1, k2) defaults per mode
    "baseline": (0, 0),
    "pyramidal": (0, 0),
    "generalized_pyramidal": (0, 1),
    "hierarchical": (1, 0),
    "exhaustive": (1, 1),
}


@dataclass(frozen=True)
class RunConfig:
    """Every free parameter of one experiment run."""

    mode: str = "baseline"
    levels: int = 2          # hierarchy levels above the base graph (L)
    K: Optional[int] = None  # levels used by the embedding; default: levels
    k1: Optional[int] = None
    k2: Optional[int] = None
    r: float = 0.5
    delta: float = 0.0
    M: int = 10000
    T: int = 5
    labeled: bool = False
    discretize_k: int = 8
    normalization: str = "l1"
    seed: int = 0
    folds: int = 10
    repetitions: int = 1
    C_grid: tuple[float, ...] = DEFAULT_C_GRID
    jobs: int = 1

    def __post_init__(self):
        self.embedding_config()  # validates mode/K/k1/k2 combinations
        self.hierarchy_params()
        self.sampler_params()
        if self.repetitions < 1:
            raise ParameterError("repetitions must be >= 1")
        if self.discretize_k < 1:
            raise ParameterError("discretize_k must be >= 1")

    def embedding_config(self) -> EmbeddingConfig:
        if self.mode == "baseline":
            return EmbeddingConfig(mode="baseline",
                                   normalization=self.normalization)
        K = self.levels if self.K is None else self.K
        dk1, dk2 = _MODE_SPANS[self.mode] if self.mode in _MODE_SPANS else (0, 0)
        k1 = dk1 if self.k1 is None else self.k1
        k2 = dk2 if self.k2 is None else self.k2
        return EmbeddingConfig(mode=self.mode, K=K, k1=k1, k2=k2,
                               normalization=self.normalization)

    def hierarchy_params(self) -> HierarchyParams:
        return HierarchyParams(levels=self.levels, r=self.r, delta=self.delta)

    def sampler_params(self, seed: Optional[int] = None) -> SamplerParams:
        return SamplerParams(M=self.M, T=self.T,
                             seed=self.seed if seed is None else seed)

    def to_dict(self) -> dict:
        cfg = self.embedding_config()
        return {
            "mode": self.mode, "levels": self.levels,
            "K": cfg.K, "k1": cfg.k1, "k2": cfg.k2,
            "r": self.r, "delta": self.delta,
            "M": self.M, "T": self.T,
            "labeled": self.labeled, "discretize_k": self.discretize_k,
            "normalization": self.normalization,
            "seed": self.seed, "folds": self.folds,
            "repetitions": self.repetitions,
            "C_grid": list(self.C_grid), "jobs": self.jobs,
        }


def prepare_graphs(ds: LoadedDataset, config: RunConfig) -> list[AttributedGraph]:
    """Discretize continuous attributes when a labeled run needs them."""
    graphs = list(ds.graphs)
    if config.labeled:
        has_attrs = any(lab.attributes for g in graphs for lab in g.node_labels) \
            or any(lab.attributes for g in graphs for lab in g.edge_labels.values())
        if has_attrs:
            graphs = discretize_attributes(
                graphs, config.discretize_k,
                seed=derive_seed(config.seed, "discretize") % (2 ** 31))
    return graphs


def _hierarchy_task(args):
    graph, params, trivial = args
    if trivial:
        return HierarchicalGraph([graph], [])
    return build_hierarchy(graph, params)


def _histogram_task(args):
    hierarchy, config, params, labeled = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # edgeless placeholder blocks
        return collect_block_histograms(hierarchy, config, params,
                                        labeled=labeled,
                                        pad_missing_levels=True)


def _pmap(task, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(task, items, chunksize=max(1, len(items) // (4 * jobs))))


def build_hierarchies(graphs: Sequence[AttributedGraph], config: RunConfig,
                      ) -> list[HierarchicalGraph]:
    trivial = config.mode == "baseline"
    params = config.hierarchy_params()
    return _pmap(_hierarchy_task,
                 [(g, params, trivial) for g in graphs], config.jobs)


def collect_dataset_histograms(hierarchies: Sequence[HierarchicalGraph],
                               config: RunConfig,
                               sampling_seed: Optional[int] = None) -> list[dict]:
    """Per-graph raw block histograms; graph i samples with a seed derived
    from (run seed, i) so results are independent of evaluation order."""
    base_seed = config.seed if sampling_seed is None else sampling_seed
    cfg = config.embedding_config()
    tasks = [(h, cfg, config.sampler_params(derive_seed(base_seed, "graph", i)),
              config.labeled)
             for i, h in enumerate(hierarchies)]
    return _pmap(_histogram_task, tasks, config.jobs)


def vocabulary_from(histograms: Sequence[dict],
                    indices: Optional[Sequence[int]] = None) -> GraphletVocabulary:
    """Finalized vocabulary over the code sets of the chosen graphs."""
    vocab = GraphletVocabulary()
    rows = histograms if indices is None else [histograms[i] for i in indices]
    for blocks in rows:
        for hist in blocks.values():
            for t, counter in hist.counts.items():
                for code in counter:
                    vocab.add(t, code)
    return vocab.finalize()


def matrix_from(histograms: Sequence[dict], vocab: GraphletVocabulary,
                config: RunConfig):
    """Embedding matrix plus the shared coordinate layout."""
    cfg = config.embedding_config()
    descs = block_descriptors(cfg)
    rows = []
    layout = None
    for blocks in histograms:
        vec = vectorize_blocks(blocks, descs, vocab, config.T,
                               cfg.normalization)
        rows.append(vec.values)
        layout = vec.layout
    return np.vstack(rows), layout


def embed_dataset(ds: LoadedDataset, config: RunConfig):
    """Whole-dataset embedding under one global vocabulary.

    Returns (matrix, layout, vocabulary, histograms). Evaluation protocols
    do not use this vocabulary; they rebuild from training rows.
    """
    graphs = prepare_graphs(ds, config)
    hierarchies = build_hierarchies(graphs, config)
    hists = collect_dataset_histograms(hierarchies, config)
    vocab = vocabulary_from(hists)
    matrix, layout = matrix_from(hists, vocab, config)
    return matrix, layout, vocab, hists


def _accuracy(model, X, y) -> float:
    return 100.0 * float(np.mean(model.predict(X) == y))


def _cv_once(histograms, y, config: RunConfig, fold_seed: int):
    """One pass of stratified CV with per-fold vocabulary rebuild."""
    fold_sets = stratified_folds(y, config.folds, fold_seed)
    accs = []
    chosen = []
    for fold_idx, test_idx in enumerate(fold_sets):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        train_idx = np.flatnonzero(mask)
        vocab = vocabulary_from(histograms, train_idx)
        X, _ = matrix_from(histograms, vocab, config)
        C = select_C(X[train_idx], y[train_idx], config.C_grid,
                     derive_seed(fold_seed, "inner", fold_idx))
        model = train_svm(X[train_idx], y[train_idx], C)
        accs.append(_accuracy(model, X[test_idx], y[test_idx]))
        chosen.append(C)
    return accs, chosen


def _holdout_once(histograms, y, split, config: RunConfig):
    train, valid, test = (np.asarray(list(p), dtype=int) for p in split)
    vocab = vocabulary_from(histograms, train)
    X, _ = matrix_from(histograms, vocab, config)
    best_C, best_score = None, -1.0
    for C in config.C_grid:
        model = train_svm(X[train], y[train], C)
        score = _accuracy(model, X[valid], y[valid])
        if score > best_score:
            best_score, best_C = score, C
    fit_idx = np.concatenate([train, valid])
    model = train_svm(X[fit_idx], y[fit_idx], best_C)
    return _accuracy(model, X[test], y[test]), best_C


def evaluate_dataset(ds: LoadedDataset, config: RunConfig) -> EvalReport:
    """Run the dataset's protocol (CV or fixed split).

    With ``config.repetitions > 1`` the whole pipeline is repeated with
    reseeded sampling, and the report aggregates across repetitions.
    """
    t0 = time.perf_counter()
    graphs = prepare_graphs(ds, config)
    hierarchies = build_hierarchies(graphs, config)
    y = np.asarray(ds.y)
    all_folds: list[list[float]] = []
    rep_means: list[float] = []
    chosen_all: list[float] = []
    for rep in range(config.repetitions):
        rep_seed = config.seed if config.repetitions == 1 \
            else derive_seed(config.seed, "pipeline-rep", rep)
        hists = collect_dataset_histograms(hierarchies, config,
                                           sampling_seed=rep_seed)
        if ds.split is not None:
            acc, C = _holdout_once(hists, y, ds.split, config)
            accs, chosen = [acc], [C]
        else:
            accs, chosen = _cv_once(hists, y, config,
                                    derive_seed(rep_seed, "folds"))
        all_folds.append(accs)
        rep_means.append(float(np.mean(accs)))
        chosen_all.extend(chosen)
    mean = float(np.mean(rep_means))
    std = float(np.std(rep_means)) if config.repetitions > 1 \
        else float(np.std(all_folds[0]))
    return EvalReport(
        protocol="holdout" if ds.split is not None else "cv",
        mean_accuracy=mean, std_accuracy=std,
        fold_accuracies=all_folds, repetition_accuracies=rep_means,
        chosen_C=chosen_all,
        timings={"wall_seconds": time.perf_counter() - t0},
        config=config.to_dict())

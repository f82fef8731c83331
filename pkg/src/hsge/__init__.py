"""Graph embeddings from hierarchical stochastic graphlet statistics.

The pipeline: build a multi-level hierarchy of a graph by repeated
betweenness-driven clustering, sample connected graphlets from its
levels, slices and unions, partition them by collision-resistant hash
codes, and concatenate the per-size code histograms into one vector per
graph. Embedded datasets feed a linear SVM for classification.
"""

from .graph import (AttributedGraph, Graphlet, HierarchicalGraph, Label,
                    UNLABELED, HIER_LABEL, induced_graphlet, level_slice,
                    level_union)
from .centrality import edge_betweenness, node_betweenness
from .clustering import Clustering, girvan_newman, target_cluster_count
from .hierarchy import (HierarchyParams, build_hierarchy, cluster_label,
                        connection_ratio)
from .sampling import SamplerParams, sample_graphlets
from .hashing import (BETWEENNESS_DECIMALS, GraphletVocabulary, HashCode,
                      Histogram, accumulate_histogram, betweenness_hash,
                      degree_hash, discretize_attributes, graphlet_code)
from .embedding import (EmbeddingConfig, EmbeddingVector, derive_seed, hsge,
                        sge)
from .classify import (DEFAULT_C_GRID, EvalReport, LabeledDataset,
                       cross_validate, holdout_eval, train_svm)
from .pipeline import RunConfig, embed_dataset, evaluate_dataset

__version__ = "0.1.0"

__all__ = [
    "AttributedGraph", "Graphlet", "HierarchicalGraph", "Label", "UNLABELED",
    "HIER_LABEL", "induced_graphlet", "level_slice", "level_union",
    "edge_betweenness", "node_betweenness",
    "Clustering", "girvan_newman", "target_cluster_count",
    "HierarchyParams", "build_hierarchy", "cluster_label", "connection_ratio",
    "SamplerParams", "sample_graphlets",
    "BETWEENNESS_DECIMALS", "GraphletVocabulary", "HashCode", "Histogram",
    "accumulate_histogram", "betweenness_hash", "degree_hash",
    "discretize_attributes", "graphlet_code",
    "EmbeddingConfig", "EmbeddingVector", "derive_seed", "hsge", "sge",
    "DEFAULT_C_GRID", "EvalReport", "LabeledDataset", "cross_validate",
    "holdout_eval", "train_svm",
    "RunConfig", "embed_dataset", "evaluate_dataset",
    "__version__",
]

"""Maximum-margin classification and the evaluation protocols.

Classification uses one-vs-rest linear SVMs solved in the dual by
coordinate descent (liblinear via scikit-learn) to a 1e-4 tolerance,
which is deterministic for a fixed data order and random state. Datasets
without a predefined split are evaluated by seeded stratified k-fold
cross-validation with the regularization constant selected on each
training portion; datasets with a (train, validation, test) split select
the constant on the validation set and report test accuracy.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.svm import LinearSVC

from .embedding import derive_seed
from .errors import DegenerateModelError, ParameterError, StateError

__all__ = ["LabeledDataset", "EvalReport", "DEFAULT_C_GRID", "train_svm",
           "cross_validate", "holdout_eval", "stratified_folds", "select_C"]

DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)

REPORT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LabeledDataset:
    """Embedding rows with class ids and an optional fixed split."""

    X: np.ndarray
    y: np.ndarray
    split: Optional[tuple[Sequence[int], Sequence[int], Sequence[int]]] = None

    def __post_init__(self):
        if len(self.X) != len(self.y):
            raise ParameterError("X and y row counts differ")
        if self.split is not None:
            train, valid, test = self.split
            parts = [set(train), set(valid), set(test)]
            if parts[0] & parts[1] or parts[0] & parts[2] or parts[1] & parts[2]:
                raise ParameterError("split lists overlap")
            if parts[0] | parts[1] | parts[2] != set(range(len(self.y))):
                raise ParameterError("split lists must cover every row")


@dataclass
class EvalReport:
    """Evaluation outcome: accuracies are percentages in [0, 100]."""

    protocol: str
    mean_accuracy: float
    std_accuracy: float
    fold_accuracies: list[list[float]]  # one inner list per repetition
    repetition_accuracies: list[float]
    chosen_C: list[float]
    timings: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "version": REPORT_FORMAT_VERSION,
            "protocol": self.protocol,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "fold_accuracies": self.fold_accuracies,
            "repetition_accuracies": self.repetition_accuracies,
            "chosen_C": self.chosen_C,
            "config": self.config,
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def table(self) -> str:
        lines = [
            f"protocol        {self.protocol}",
            f"mean accuracy   {self.mean_accuracy:.2f}",
            f"std accuracy    {self.std_accuracy:.2f}",
        ]
        for i, accs in enumerate(self.fold_accuracies):
            cells = " ".join(f"{a:6.2f}" for a in accs)
            lines.append(f"rep {i:<2d}          {cells}")
        lines.append("chosen C        " +
                     " ".join(str(c) for c in self.chosen_C))
        return "\n".join(lines)


def train_svm(X, y, C: float = 1.0) -> LinearSVC:
    """Fit one-vs-rest linear SVMs; raises on single-class input."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if not np.all(np.isfinite(X)):
        raise ParameterError("embedding matrix contains non-finite values")
    if len(np.unique(y)) < 2:
        raise DegenerateModelError("training data contains a single class")
    model = LinearSVC(C=C, tol=1e-4, max_iter=200000, random_state=0)
    model.fit(X, y)
    return model


def _accuracy(model, X, y) -> float:
    return 100.0 * float(np.mean(model.predict(X) == y))


def stratified_folds(y, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded stratified partition: class counts per fold differ by <= 1."""
    y = np.asarray(y)
    if folds < 2:
        raise ParameterError("folds must be >= 2")
    classes, counts = np.unique(y, return_counts=True)
    if counts.min() < folds:
        raise ParameterError(
            f"fold count {folds} exceeds smallest class size {counts.min()}")
    rng = np.random.Generator(np.random.PCG64(seed))
    buckets: list[list[int]] = [[] for _ in range(folds)]
    offset = 0
    for c in classes:
        members = np.flatnonzero(y == c)
        rng.shuffle(members)
        for i, idx in enumerate(members):
            buckets[(offset + i) % folds].append(int(idx))
        offset += len(members)
    return [np.asarray(sorted(b)) for b in buckets]


def select_C(X, y, C_grid, seed: int) -> float:
    """Inner 3-fold selection on the training portion; ties pick smaller C."""
    counts = np.unique(y, return_counts=True)[1]
    inner = min(3, int(counts.min()))
    if inner < 2:
        # not enough per-class data to split again: score on training fit
        best = max(C_grid, key=lambda C: (_accuracy(train_svm(X, y, C), X, y), -C))
        return best
    inner_folds = stratified_folds(y, inner, seed)
    best_C, best_score = None, -1.0
    for C in C_grid:
        scores = []
        for test_idx in inner_folds:
            mask = np.ones(len(y), dtype=bool)
            mask[test_idx] = False
            model = train_svm(X[mask], y[mask], C)
            scores.append(_accuracy(model, X[test_idx], y[test_idx]))
        score = float(np.mean(scores))
        if score > best_score:
            best_score, best_C = score, C
    return best_C


def cross_validate(ds: LabeledDataset, folds: int = 10,
                   C_grid: Sequence[float] = DEFAULT_C_GRID,
                   repetitions: int = 1, seed: int = 0) -> EvalReport:
    """Stratified k-fold cross-validation on a fixed embedding matrix."""
    if ds.split is not None:
        raise StateError("dataset has a predefined split; use holdout_eval")
    if repetitions < 1:
        raise ParameterError("repetitions must be >= 1")
    t0 = time.perf_counter()
    all_folds: list[list[float]] = []
    rep_means: list[float] = []
    chosen: list[float] = []
    for rep in range(repetitions):
        rep_seed = derive_seed(seed, "cv-rep", rep)
        fold_sets = stratified_folds(ds.y, folds, rep_seed)
        accs = []
        for fold_idx, test_idx in enumerate(fold_sets):
            mask = np.ones(len(ds.y), dtype=bool)
            mask[test_idx] = False
            X_train, y_train = ds.X[mask], ds.y[mask]
            C = select_C(X_train, y_train, C_grid,
                          derive_seed(rep_seed, "inner", fold_idx))
            model = train_svm(X_train, y_train, C)
            accs.append(_accuracy(model, ds.X[test_idx], ds.y[test_idx]))
            chosen.append(C)
        all_folds.append(accs)
        rep_means.append(float(np.mean(accs)))
    mean = float(np.mean(rep_means))
    std = float(np.std(rep_means)) if repetitions > 1 else float(np.std(all_folds[0]))
    return EvalReport(protocol="cv", mean_accuracy=mean, std_accuracy=std,
                      fold_accuracies=all_folds,
                      repetition_accuracies=rep_means, chosen_C=chosen,
                      timings={"wall_seconds": time.perf_counter() - t0})


def holdout_eval(ds: LabeledDataset,
                 C_grid: Sequence[float] = DEFAULT_C_GRID) -> EvalReport:
    """Fixed-split evaluation: C picked on validation, accuracy on test."""
    if ds.split is None:
        raise StateError("dataset has no predefined split; use cross_validate")
    t0 = time.perf_counter()
    train, valid, test = (np.asarray(list(part), dtype=int)
                          for part in ds.split)
    best_C, best_score = None, -1.0
    for C in C_grid:
        model = train_svm(ds.X[train], ds.y[train], C)
        score = _accuracy(model, ds.X[valid], ds.y[valid])
        if score > best_score:
            best_score, best_C = score, C
    model = train_svm(ds.X[np.concatenate([train, valid])],
                      ds.y[np.concatenate([train, valid])], best_C)
    acc = _accuracy(model, ds.X[test], ds.y[test])
    return EvalReport(protocol="holdout", mean_accuracy=acc, std_accuracy=0.0,
                      fold_accuracies=[[acc]], repetition_accuracies=[acc],
                      chosen_C=[best_C],
                      timings={"wall_seconds": time.perf_counter() - t0})

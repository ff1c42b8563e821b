"""ROC curves, AUC and AUC-versus-k sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .baselines import score
from .core import Dataset, DataError, ParameterError
from .density import KernelSpec
from .neighbors import KnnGraph, build_knn_graph


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def roc_auc(scores, labels) -> RocCurve:
    """ROC of ``scores`` against boolean ``labels`` (True = outlier = positive).

    One threshold per distinct score; points with equal scores enter the
    curve together as a single diagonal step.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=bool).ravel()
    if scores.shape != labels.shape:
        raise DataError(f"{scores.size} scores for {labels.size} labels")
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC needs at least one outlier and one inlier label")

    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    # last position of every block of equal scores
    ends = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.cumsum(y)[ends]
    fp = (ends + 1) - tp
    tpr = np.r_[0.0, tp / n_pos]
    fpr = np.r_[0.0, fp / n_neg]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(fpr, tpr, auc)


@dataclass(frozen=True)
class SweepRow:
    k: int
    method: str
    auc: float


def auc_table(
    data: Dataset,
    methods: Sequence[str],
    k_values: Iterable[int],
    spec: KernelSpec,
    graph_builder: Callable[[Dataset, int], KnnGraph] = build_knn_graph,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """AUC of every method at every k.

    One graph is built per k and shared by all methods at that k. Rows come
    out in input k order, methods in the order given.
    """
    if data.labels is None:
        raise DataError("AUC sweeps need a labelled dataset")
    k_values = list(k_values)
    if not k_values:
        raise ParameterError("no k values given")
    for k in k_values:
        if not 1 <= k <= data.n - 1:
            raise ParameterError(f"k = {k} outside [1, {data.n - 1}]")

    def one_k(k):
        graph = graph_builder(data, k)
        return [
            SweepRow(k, m, roc_auc(score(data, graph, m, spec).scores, data.labels).auc)
            for m in methods
        ]

    with ThreadPoolExecutor(max_workers=workers or 1) as pool:
        blocks = list(pool.map(one_k, k_values))
    return [row for block in blocks for row in block]


def auc_vs_k_sweep(
    data: Dataset,
    method: str,
    k_values: Iterable[int],
    spec: KernelSpec,
    graph_builder: Callable[[Dataset, int], KnnGraph] = build_knn_graph,
) -> list[tuple[int, float]]:
    rows = auc_table(data, [method], k_values, spec, graph_builder)
    return [(r.k, r.auc) for r in rows]

"""Relative density-based outlier score, ranking and thresholding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Dataset, ParameterError
from .density import KernelSpec, density_field
from .neighbors import KnnGraph, extended_neighborhoods


@dataclass(frozen=True)
class ScoreReport:
    """Per-point outlier scores plus the settings that produced them.

    ``scores`` grow with outlierness. ``ranks`` are 1-based, 1 being the most
    outlying, with ties going to the smaller index. ``density`` is only set
    for the RDOS method.
    """

    scores: np.ndarray
    ranks: np.ndarray
    method: str
    k: int
    h: Optional[float] = None
    convention: Optional[str] = None
    fingerprint: Optional[str] = None
    density: Optional[np.ndarray] = None

    @property
    def rdos(self) -> np.ndarray:
        return self.scores

    @property
    def order(self) -> np.ndarray:
        """Point indices from most to least outlying."""
        return np.argsort(self.ranks, kind="stable")


def rank_scores(scores) -> np.ndarray:
    scores = np.asarray(scores, dtype=np.float64)
    order = np.lexsort((np.arange(scores.size), -scores))
    ranks = np.empty(scores.size, dtype=np.intp)
    ranks[order] = np.arange(1, scores.size + 1)
    return ranks


def make_report(scores, method: str, k: int, data: Optional[Dataset] = None, **meta) -> ScoreReport:
    scores = np.asarray(scores, dtype=np.float64)
    ranks = rank_scores(scores)
    for arr in (scores, ranks):
        arr.setflags(write=False)
    fingerprint = data.fingerprint() if data is not None else None
    return ScoreReport(scores, ranks, method, k, fingerprint=fingerprint, **meta)


def rdos_from_density(density: np.ndarray, indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Mean density over each neighbourhood divided by the point's own density."""
    n = density.size
    counts = np.diff(indptr)
    rows = np.repeat(np.arange(n), counts)
    neighbor_sum = np.bincount(rows, weights=density[indices], minlength=n)
    return neighbor_sum / (counts * density)


def rdos_scores(data: Dataset, graph: KnnGraph, spec: KernelSpec) -> ScoreReport:
    if graph.n != data.n:
        raise ParameterError(f"graph has {graph.n} vertices, dataset has {data.n} points")
    indptr, indices = extended_neighborhoods(graph)
    density = density_field(data, indptr, indices, spec)
    scores = rdos_from_density(density, indptr, indices)
    density.setflags(write=False)
    return make_report(
        scores,
        "rdos",
        graph.k,
        data,
        h=spec.h,
        convention=spec.convention,
        density=density,
    )


def top_n(report: ScoreReport, n: int) -> list[int]:
    size = report.scores.size
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= size:
        raise ParameterError(f"n must be an integer in [1, {size}], got {n}")
    return report.order[: int(n)].tolist()


def threshold_detect(report: ScoreReport, tau: float) -> np.ndarray:
    """Flag points whose score is strictly above ``tau``."""
    if not tau > 1:
        raise ParameterError(
            f"tau must be > 1 (got {tau}): non-outlying points score about 1 "
            "on average, so any threshold at or below 1 flags ordinary points"
        )
    return report.scores > tau

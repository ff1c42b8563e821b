"""Comparison detectors built on the shared KNN graph.

All four return one value per point, larger meaning more outlying.

ODIN
    In-degree of the point in the KNN graph, reported as ``1 / (indegree + 1)``.
LOF
    ``reach(p, o) = max(kdist(o), d(p, o))``,
    ``lrd(p) = k / sum_{o in kNN(p)} reach(p, o)``,
    ``LOF(p) = mean_{o in kNN(p)} lrd(o) / lrd(p)``.
INFLO
    ``den(p) = 1 / kdist(p)``, influence space ``IS(p) = kNN(p) | RNN(p)``,
    ``INFLO(p) = mean_{o in IS(p)} den(o) / den(p)``.
MNN
    Number of mutual neighbours ``m(p) = |{o in kNN(p) : p in kNN(o)}|``,
    reported as ``1 / (m + 1)``.

Duplicates: a zero reachability sum makes ``lrd`` infinite; such points get
LOF 1, and their infinite ``lrd`` is capped at ``DENSITY_CAP`` when averaged
into other points' scores. A zero k-distance caps ``den`` at ``DENSITY_CAP``
in the same way.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import Dataset, ParameterError
from .density import KernelSpec
from .neighbors import KnnGraph
from .rdos import ScoreReport, make_report, rdos_scores

METHODS = ("rdos", "odin", "lof", "inflo", "mnn")
DENSITY_CAP = 1e12


def odin_scores(graph: KnnGraph) -> np.ndarray:
    return 1.0 / (graph.indegree() + 1.0)


def local_reachability_density(data: Dataset, graph: KnnGraph) -> np.ndarray:
    nbrs = graph.out_edges
    reach = np.maximum(graph.k_distance[nbrs], graph.out_dist)
    total = reach.sum(axis=1)
    with np.errstate(divide="ignore"):
        return np.where(total > 0, graph.k / total, np.inf)


def lof_scores(data: Dataset, graph: KnnGraph) -> np.ndarray:
    lrd = local_reachability_density(data, graph)
    capped = np.minimum(lrd, DENSITY_CAP)
    mean_nbr = capped[graph.out_edges].mean(axis=1)
    return np.where(np.isinf(lrd), 1.0, mean_nbr / capped)


def inflo_scores(data: Dataset, graph: KnnGraph) -> np.ndarray:
    kdist = graph.k_distance
    with np.errstate(divide="ignore"):
        den = np.minimum(np.where(kdist > 0, 1.0 / kdist, np.inf), DENSITY_CAP)
    out = np.empty(graph.n)
    for p in range(graph.n):
        space = np.union1d(graph.out_edges[p], graph.in_edges[p])
        out[p] = den[space].mean() / den[p]
    return out


def mutual_counts(graph: KnnGraph) -> np.ndarray:
    adj = graph.adjacency()
    return np.asarray(adj.multiply(adj.T).sum(axis=1)).ravel()


def mnn_scores(data: Dataset, graph: KnnGraph) -> np.ndarray:
    return 1.0 / (mutual_counts(graph) + 1.0)


def score(
    data: Dataset,
    graph: KnnGraph,
    method: str = "rdos",
    spec: Optional[KernelSpec] = None,
) -> ScoreReport:
    """Score every point with ``method`` over a prebuilt graph."""
    if method == "rdos":
        if spec is None:
            raise ParameterError("rdos needs a KernelSpec")
        return rdos_scores(data, graph, spec)
    if method == "odin":
        values = odin_scores(graph)
    elif method == "lof":
        values = lof_scores(data, graph)
    elif method == "inflo":
        values = inflo_scores(data, graph)
    elif method == "mnn":
        values = mnn_scores(data, graph)
    else:
        raise ParameterError(f"unknown method {method!r}; expected one of {METHODS}")
    return make_report(values, method, graph.k, data)

"""KNN graph construction and the derived neighbour sets.

Every point gets exactly ``k`` outbound edges to its nearest neighbours,
ordered by distance with ties broken by the smaller index. Inbound edges give
the reverse neighbours; the inbound edges of a point's own neighbours give its
shared neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .core import Dataset, ParameterError, check_k, sq_distances
from .kdtree import KDTree

LEAF_SIZE = 16
# rows per block in the brute-force scan, bounds memory at ~CHUNK * N doubles
_CHUNK = 512


@dataclass(frozen=True)
class KnnGraph:
    k: int
    out_edges: np.ndarray  # (N, k) neighbour indices, nearest first
    out_dist: np.ndarray  # (N, k) matching Euclidean distances
    in_edges: tuple  # in_edges[u]: sorted array of v with u in out_edges[v]

    @property
    def n(self) -> int:
        return self.out_edges.shape[0]

    @property
    def k_distance(self) -> np.ndarray:
        """Distance from every point to its k-th nearest neighbour."""
        return self.out_dist[:, -1]

    def indegree(self) -> np.ndarray:
        return np.bincount(self.out_edges.ravel(), minlength=self.n)

    def adjacency(self) -> sp.csr_matrix:
        """Sparse 0/1 matrix with ``A[v, u] = 1`` iff ``u`` is in ``out_edges[v]``."""
        n, k = self.out_edges.shape
        rows = np.repeat(np.arange(n), k)
        return sp.csr_matrix(
            (np.ones(n * k, dtype=np.int64), (rows, self.out_edges.ravel())), shape=(n, n)
        )

    def _check_vertex(self, p: int) -> int:
        if isinstance(p, bool) or int(p) != p or not 0 <= p < self.n:
            raise ParameterError(f"vertex index {p} outside [0, {self.n - 1}]")
        return int(p)


def _finish(k: int, d2: np.ndarray, idx: np.ndarray) -> KnnGraph:
    n = idx.shape[0]
    src = np.repeat(np.arange(n), k)
    dst = idx.ravel()
    order = np.lexsort((src, dst))
    counts = np.bincount(dst, minlength=n)
    in_edges = tuple(np.split(src[order], np.cumsum(counts)[:-1]))
    for arr in in_edges:
        arr.setflags(write=False)
    idx = np.ascontiguousarray(idx, dtype=np.intp)
    dist = np.sqrt(d2)
    idx.setflags(write=False)
    dist.setflags(write=False)
    return KnnGraph(k=k, out_edges=idx, out_dist=dist, in_edges=in_edges)


def build_knn_graph_bruteforce(data: Dataset, k: int) -> KnnGraph:
    """O(N^2) reference builder: scan every pair of points."""
    check_k(k, data.n)
    x = data.points
    n = data.n
    idx = np.empty((n, k), dtype=np.intp)
    d2_out = np.empty((n, k))
    cols = np.arange(n)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        d2 = sq_distances(x[start:stop], x)
        d2[np.arange(stop - start), np.arange(start, stop)] = np.inf
        sel = np.lexsort((np.broadcast_to(cols, d2.shape), d2), axis=-1)[:, :k]
        idx[start:stop] = sel
        d2_out[start:stop] = np.take_along_axis(d2, sel, axis=1)
    return _finish(k, d2_out, idx)


def build_knn_graph_kdtree(data: Dataset, k: int, leaf_size: int = LEAF_SIZE) -> KnnGraph:
    check_k(k, data.n)
    tree = KDTree(data.points, leaf_size=leaf_size)
    d2, idx = tree.self_knn(k)
    return _finish(k, d2, idx)


def build_knn_graph(data: Dataset, k: int, method: str = "kdtree") -> KnnGraph:
    builders: dict[str, Callable[[Dataset, int], KnnGraph]] = {
        "kdtree": build_knn_graph_kdtree,
        "brute": build_knn_graph_bruteforce,
    }
    try:
        builder = builders[method]
    except KeyError:
        raise ParameterError(f"unknown graph builder {method!r}") from None
    return builder(data, k)


def reverse_neighbors(g: KnnGraph, p: int) -> set:
    return set(g.in_edges[g._check_vertex(p)].tolist())


def shared_neighbors(g: KnnGraph, p: int) -> set:
    """Points that have at least one of ``p``'s k nearest neighbours among their own."""
    p = g._check_vertex(p)
    out: set = set()
    for x in g.out_edges[p]:
        out.update(g.in_edges[x].tolist())
    out.discard(p)
    return out


@dataclass(frozen=True)
class NeighborSets:
    knn: frozenset
    rnn: frozenset
    snn: frozenset
    extended: frozenset


def extended_neighborhood(g: KnnGraph, p: int) -> NeighborSets:
    p = g._check_vertex(p)
    knn = frozenset(g.out_edges[p].tolist())
    rnn = frozenset(reverse_neighbors(g, p))
    snn = frozenset(shared_neighbors(g, p))
    return NeighborSets(knn, rnn, snn, knn | rnn | snn)


def extended_neighborhoods(g: KnnGraph) -> tuple[np.ndarray, np.ndarray]:
    """Extended neighbourhoods of all points at once, in CSR form.

    With ``A`` the adjacency matrix, the non-zeros of ``A + A.T + A @ A.T``
    outside the diagonal are exactly KNN, RNN and SNN combined. Returns
    ``(indptr, indices)``; row ``p`` is ``indices[indptr[p]:indptr[p + 1]]``,
    sorted ascending.
    """
    a = g.adjacency()
    s = (a + a.T + a @ a.T).tocoo()
    off = s.row != s.col
    s = sp.csr_matrix((s.data[off], (s.row[off], s.col[off])), shape=s.shape)
    s.sort_indices()
    return s.indptr.astype(np.intp), s.indices.astype(np.intp)


def dump_edges(g: KnnGraph) -> list[str]:
    """Edge list lines ``src dst distance``, one per outbound edge."""
    lines = []
    for src in range(g.n):
        for dst, dist in zip(g.out_edges[src].tolist(), g.out_dist[src].tolist()):
            lines.append(f"{src} {dst} {dist:.9g}")
    return lines

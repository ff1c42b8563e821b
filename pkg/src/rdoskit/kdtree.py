"""Exact k-d tree for k-nearest-neighbour queries.

Median split on the dimension of widest spread, buckets of at most
``leaf_size`` points. Neighbours are ordered by (squared distance, index),
which makes results reproducible and identical to a brute-force scan.
"""

from __future__ import annotations

import heapq

import numpy as np

from .core import sq_distances


class KDTree:
    def __init__(self, points, leaf_size: int = 16):
        self.points = np.asarray(points, dtype=np.float64)
        if self.points.ndim != 2:
            raise ValueError("points must be a 2-d array")
        self.leaf_size = max(1, int(leaf_size))
        n = self.points.shape[0]
        self.index = np.arange(n)

        # node arrays, filled by _build
        self._lo = []
        self._hi = []
        self._start = []
        self._end = []
        self._children = []
        self._build(0, n)
        self._lo = np.array(self._lo)
        self._hi = np.array(self._hi)
        self._start = np.array(self._start)
        self._end = np.array(self._end)
        self._leaves = np.array(
            [i for i, c in enumerate(self._children) if c is None], dtype=np.intp
        )

    def _build(self, start: int, end: int) -> int:
        node = len(self._start)
        idx = self.index[start:end]
        pts = self.points[idx]
        self._lo.append(pts.min(axis=0))
        self._hi.append(pts.max(axis=0))
        self._start.append(start)
        self._end.append(end)
        self._children.append(None)

        spread = self._hi[node] - self._lo[node]
        if end - start <= self.leaf_size or not np.any(spread > 0):
            return node
        dim = int(np.argmax(spread))
        mid = (end - start) // 2
        part = np.argpartition(pts[:, dim], mid, kind="introselect")
        self.index[start:end] = idx[part]
        left = self._build(start, start + mid)
        right = self._build(start + mid, end)
        self._children[node] = (left, right)
        return node

    def _box_sqdist(self, node: int, q: np.ndarray) -> float:
        gap = np.maximum(0.0, np.maximum(self._lo[node] - q, q - self._hi[node]))
        return float(_ordered_sum(gap[None, :] ** 2)[0])

    def query(self, q, k: int, exclude: int = -1):
        """The ``k`` nearest stored points to ``q``.

        Returns ``(sq_dists, indices)`` sorted by (distance, index). Stored
        point ``exclude`` is skipped, which is how self-queries drop the
        query point itself.
        """
        q = np.asarray(q, dtype=np.float64)
        # max-heap of the best k, keyed on (-d2, -index)
        best: list = []

        def worst():
            return (-best[0][0], -best[0][1])

        def visit(node):
            if len(best) == k and self._box_sqdist(node, q) > worst()[0]:
                return
            children = self._children[node]
            if children is None:
                idx = self.index[self._start[node]:self._end[node]]
                d2 = sq_distances(q[None, :], self.points[idx])[0]
                for dist, i in zip(d2.tolist(), idx.tolist()):
                    if i == exclude:
                        continue
                    if len(best) < k:
                        heapq.heappush(best, (-dist, -i))
                    elif (dist, i) < worst():
                        heapq.heapreplace(best, (-dist, -i))
                return
            left, right = children
            if self._box_sqdist(left, q) <= self._box_sqdist(right, q):
                visit(left)
                visit(right)
            else:
                visit(right)
                visit(left)

        visit(0)
        found = sorted((-d, -i) for d, i in best)
        return (
            np.array([d for d, _ in found]),
            np.array([i for _, i in found], dtype=np.intp),
        )

    def self_knn(self, k: int):
        """k nearest neighbours of every stored point, itself excluded.

        Processes one leaf bucket at a time: a first pass over the closest
        buckets bounds the k-th distance of every query in the bucket, then
        every bucket whose box lies within that bound is scanned exactly.
        Returns ``(sq_dists, indices)`` of shape ``(N, k)``.
        """
        n = self.points.shape[0]
        if not 1 <= k <= n - 1:
            raise ValueError(f"k must be in [1, {n - 1}]")
        out_idx = np.empty((n, k), dtype=np.intp)
        out_d2 = np.empty((n, k))
        leaves = self._leaves
        lo, hi = self._lo[leaves], self._hi[leaves]
        sizes = self._end[leaves] - self._start[leaves]

        for leaf in leaves:
            members = self.index[self._start[leaf]:self._end[leaf]]
            gap = np.maximum(0.0, np.maximum(lo - self._hi[leaf], self._lo[leaf] - hi))
            box_d2 = _ordered_sum(gap**2)

            order = np.argsort(box_d2, kind="stable")
            enough = np.searchsorted(np.cumsum(sizes[order]), k + 1) + 1
            first = self._gather(leaves[order[:enough]])
            d2 = sq_distances(self.points[members], self.points[first])
            d2[members[:, None] == first[None, :]] = np.inf
            bound = np.max(np.partition(d2, k - 1, axis=1)[:, k - 1])

            cand = self._gather(leaves[box_d2 <= bound])
            d2 = sq_distances(self.points[members], self.points[cand])
            d2[members[:, None] == cand[None, :]] = np.inf
            sel = np.lexsort((np.broadcast_to(cand, d2.shape), d2), axis=-1)[:, :k]
            out_idx[members] = cand[sel]
            out_d2[members] = np.take_along_axis(d2, sel, axis=1)
        return out_d2, out_idx

    def _gather(self, nodes) -> np.ndarray:
        return np.concatenate([self.index[self._start[v]:self._end[v]] for v in nodes])


def _ordered_sum(terms: np.ndarray) -> np.ndarray:
    # Same summation order as core.sq_distances. Box bounds then never exceed
    # the point distances they bound, even in the last ulp.
    out = terms[:, 0].copy()
    for j in range(1, terms.shape[1]):
        out += terms[:, j]
    return out

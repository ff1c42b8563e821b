"""Shared data types, errors and distance helpers."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class ParameterError(ValueError):
    """A parameter is outside its valid range (k, h, tau, n, index...)."""


class DataError(ValueError):
    """Input data is malformed: ragged, non-numeric, non-finite or too small."""


class DimensionError(ValueError):
    """Two points or arrays disagree on dimensionality."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of ``N`` points in ``R^d``.

    ``labels`` is an optional boolean vector, ``True`` meaning outlier.
    Arrays are stored read-only.
    """

    points: np.ndarray
    labels: Optional[np.ndarray] = None
    names: Optional[tuple] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DataError(f"points must be a 2-d array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise DataError(f"a dataset needs at least 2 points, got {pts.shape[0]}")
        if not np.all(np.isfinite(pts)):
            raise DataError("points contain NaN or infinite coordinates")
        object.__setattr__(self, "points", _frozen(pts))

        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise DataError(
                    f"labels have shape {lab.shape}, expected ({pts.shape[0]},)"
                )
            object.__setattr__(self, "labels", _frozen(lab.astype(bool)))
        if self.names is not None:
            names = tuple(str(n) for n in self.names)
            if len(names) != pts.shape[1]:
                raise DataError(f"{len(names)} feature names for {pts.shape[1]} features")
            object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def fingerprint(self) -> str:
        """Short content hash, used to tie score reports to their input."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.points).tobytes())
        h.update(str(self.points.shape).encode())
        if self.labels is not None:
            h.update(self.labels.tobytes())
        return h.hexdigest()[:16]

    def take(self, order: Sequence[int]) -> "Dataset":
        order = np.asarray(order)
        labels = None if self.labels is None else self.labels[order]
        return Dataset(self.points[order], labels, self.names)


@dataclass(frozen=True)
class Params:
    k: int = 21
    h: float = 0.01
    tau: Optional[float] = None
    top_n: Optional[int] = None

    def check(self, n_points: int) -> None:
        check_k(self.k, n_points)
        check_h(self.h)
        if self.tau is not None and not self.tau > 1:
            raise ParameterError(
                f"tau must be > 1 (got {self.tau}); scores of ordinary points "
                "concentrate around 1, so a threshold <= 1 flags inliers too"
            )
        if self.top_n is not None and not 1 <= self.top_n <= n_points:
            raise ParameterError(f"top_n must be in [1, {n_points}], got {self.top_n}")


def check_k(k: int, n_points: int) -> None:
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= n_points - 1:
        raise ParameterError(f"k must be an integer in [1, {n_points - 1}], got {k}")


def check_h(h: float) -> None:
    if not (math.isfinite(h) and h > 0):
        raise ParameterError(f"kernel width h must be positive and finite, got {h}")


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.size} vs {b.size}")
    return math.sqrt(float(np.sum((a - b) ** 2)))


def sq_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise squared distances between rows of ``a`` and ``b``.

    Accumulates one coordinate at a time so every entry is computed with the
    same operation order whatever the array shapes; the k-d tree and the
    brute-force graph builder rely on this to agree bit for bit on ties.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = (a[:, None, 0] - b[None, :, 0]) ** 2
    for j in range(1, a.shape[1]):
        out += (a[:, None, j] - b[None, :, j]) ** 2
    return out


def rowwise_sq_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distance between ``a[i]`` and ``b[i]`` for every row ``i``."""
    out = (a[:, 0] - b[:, 0]) ** 2
    for j in range(1, a.shape[1]):
        out += (a[:, j] - b[:, j]) ** 2
    return out


def minmax_normalize(data: Dataset) -> Dataset:
    """Rescale every feature to [0, 1]; constant features become 0."""
    x = data.points
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    out = np.where(span > 0, (x - lo) / safe, 0.0)
    # (x - lo) / span can land a hair above 1 through rounding
    np.clip(out, 0.0, 1.0, out=out)
    return Dataset(out, data.labels, data.names)


def make_rng(seed=None) -> np.random.Generator:
    return np.random.default_rng(seed)

"""False-alarm bound and Monte Carlo checks of the score's asymptotics.

For a point whose ``|S|`` neighbours are uniform in a ball of radius ``r``
around it, the probability that its score exceeds ``gamma > 1`` is bounded by

    exp(-2 (gamma-1)^2 (|S|+1)^2 (2 pi)^d h^(2d) / (|S| (2|S|+gamma+1)^2 V^2))

with ``V`` the volume of the ``n``-ball of radius ``r`` and ``n = d - 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Dataset, ParameterError, check_h
from .density import KernelSpec
from .neighbors import build_knn_graph
from .rdos import rdos_scores


@dataclass(frozen=True)
class BoundInput:
    gamma: float
    s_size: int
    d: int
    h: float
    r: float

    def __post_init__(self):
        if not self.gamma > 1:
            raise ParameterError(f"gamma must be > 1, got {self.gamma}")
        if int(self.s_size) != self.s_size or self.s_size < 1:
            raise ParameterError(f"|S| must be a positive integer, got {self.s_size}")
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"d must be a positive integer, got {self.d}")
        check_h(self.h)
        if not self.r > 0:
            raise ParameterError(f"radius must be positive, got {self.r}")

    @property
    def volume(self) -> float:
        return ball_volume(self.r, self.d - 1)


def ball_volume(r: float, n: int) -> float:
    """Volume of the ``n``-dimensional ball of radius ``r`` (1 when ``n = 0``)."""
    if not r > 0:
        raise ParameterError(f"radius must be positive, got {r}")
    if n < 0:
        raise ParameterError(f"dimension must be non-negative, got {n}")
    return math.pi ** (n / 2.0) * r**n / math.gamma(n / 2.0 + 1.0)


def false_alarm_exponent(b: BoundInput) -> float:
    s = b.s_size
    num = 2.0 * (b.gamma - 1.0) ** 2 * (s + 1) ** 2 * (2.0 * math.pi) ** b.d * b.h ** (2 * b.d)
    den = s * (2.0 * s + b.gamma + 1.0) ** 2 * b.volume**2
    return num / den


def false_alarm_bound(b: BoundInput) -> float:
    return min(1.0, math.exp(-false_alarm_exponent(b)))


def sample_ball(rng: np.random.Generator, size: tuple, d: int, r: float) -> np.ndarray:
    """Uniform samples in the d-ball of radius r; output shape ``size + (d,)``."""
    g = rng.standard_normal(size + (d,))
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    radius = r * rng.random(size) ** (1.0 / d)
    return g * radius[..., None]


def centre_scores(neighbours: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Score of a point at the origin against each batch of neighbours.

    ``neighbours`` has shape ``(trials, |S|, d)``. Every density, the centre's
    and each neighbour's, is estimated over the same ``|S| + 1`` points.
    """
    trials, s, d = neighbours.shape
    pts = np.concatenate([np.zeros((trials, 1, d)), neighbours], axis=1)
    sq = np.zeros((trials, s + 1, s + 1))
    for j in range(d):
        diff = pts[:, :, None, j] - pts[:, None, :, j]
        sq += diff * diff
    dens = spec.scale * spec.kernel_of_sq(sq).sum(axis=2) / (s + 1)
    return dens[:, 1:].mean(axis=1) / dens[:, 0]


@dataclass(frozen=True)
class Theorem2Result:
    empirical_rate: float
    bound: float
    trials: int


def validate_theorem2(
    trials: int,
    b: BoundInput,
    seed=None,
    convention: str = "paper",
    partitions: int = 1,
    workers: Optional[int] = None,
) -> Theorem2Result:
    """Monte Carlo estimate of ``P[score > gamma]`` next to its bound.

    Trials are split over ``partitions`` independent streams spawned from
    ``seed``; the result depends on (seed, trials, partitions) only, not on
    ``workers``.
    """
    if trials < 1000:
        raise ParameterError(f"need at least 1000 trials, got {trials}")
    spec = KernelSpec(b.h, b.d, convention)
    streams = np.random.SeedSequence(seed).spawn(partitions)
    sizes = [len(a) for a in np.array_split(np.arange(trials), partitions)]
    batch = 2000

    def run(stream, count):
        rng = np.random.default_rng(stream)
        hits = 0
        for start in range(0, count, batch):
            m = min(batch, count - start)
            nb = sample_ball(rng, (m, b.s_size), b.d, b.r)
            hits += int(np.count_nonzero(centre_scores(nb, spec) > b.gamma))
        return hits

    with ThreadPoolExecutor(max_workers=workers or 1) as pool:
        hits = sum(pool.map(run, streams, sizes))
    return Theorem2Result(hits / trials, false_alarm_bound(b), trials)


@dataclass(frozen=True)
class Theorem1Result:
    mean_rdos: float
    std_rdos: float
    n_interior: int


def validate_theorem1(
    n_points: int,
    k: int,
    spec: Optional[KernelSpec] = None,
    seed=None,
    margin: float = 0.1,
) -> Theorem1Result:
    """Score i.i.d. uniform points on the unit square and summarise interior scores.

    A point counts as interior when its k-distance is below ``margin`` and it
    lies at least ``margin`` from every edge of the square; points near the
    edge see a truncated neighbourhood, which the large-sample limit ignores.
    """
    if n_points < 50 * k:
        raise ParameterError(f"n_points must be at least 50*k = {50 * k}, got {n_points}")
    spec = spec or KernelSpec(0.01, 2)
    if spec.d != 2:
        raise ParameterError("the uniform-square validator works in d = 2")
    rng = np.random.default_rng(seed)
    data = Dataset(rng.random((n_points, 2)))
    graph = build_knn_graph(data, k)
    report = rdos_scores(data, graph, spec)
    x = data.points
    edge = np.minimum(x, 1.0 - x).min(axis=1)
    interior = (graph.k_distance < margin) & (edge >= margin)
    vals = report.scores[interior]
    return Theorem1Result(float(vals.mean()), float(vals.std()), int(interior.sum()))

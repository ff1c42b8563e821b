"""Synthetic datasets with planted outliers.

``two_gaussians``
    Two isotropic Gaussian clusters centred at (0.5, 0.8) and (2, 0.5), 100
    points each, plus three planted outliers.
``cosine``
    Points scattered around ``x2 = cos(x1) + w`` with ``w ~ N(0, sigma^2)``,
    ``sigma^2 = 0.1``, plus four planted outliers.

Cluster spread, curve length and outlier positions are not pinned down by
the original experiment, so the defaults below are choices: each planted
outlier sits at least five noise standard deviations from every cluster
centre or from the noiseless curve. Generated inliers come first, planted
outliers are appended at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Dataset, ParameterError, make_rng

TWO_GAUSSIAN_CENTERS = np.array([[0.5, 0.8], [2.0, 0.5]])
TWO_GAUSSIAN_OUTLIERS = np.array([[1.25, 0.95], [0.5, 1.45], [2.0, -0.15]])
COSINE_OUTLIERS = np.array(
    [[math.pi, 2.5], [2 * math.pi, -2.5], [3 * math.pi, 2.5], [0.5 * math.pi, -2.5]]
)
COSINE_RANGE = (0.0, 4 * math.pi)


@dataclass(frozen=True)
class SynthSpec:
    variant: str = "two_gaussians"
    n: Optional[int] = None  # per cluster, or along the curve
    noise_sigma2: Optional[float] = None
    outliers: Optional[np.ndarray] = None
    seed: Optional[int] = 0

    def resolved(self) -> "SynthSpec":
        if self.variant == "two_gaussians":
            defaults = (100, 0.01, TWO_GAUSSIAN_OUTLIERS)
        elif self.variant == "cosine":
            defaults = (400, 0.1, COSINE_OUTLIERS)
        else:
            raise ParameterError(f"unknown variant {self.variant!r}")
        n = defaults[0] if self.n is None else int(self.n)
        s2 = defaults[1] if self.noise_sigma2 is None else float(self.noise_sigma2)
        out = defaults[2] if self.outliers is None else np.asarray(self.outliers, dtype=float)
        if n < 1:
            raise ParameterError("n must be positive")
        if s2 < 0:
            raise ParameterError("noise_sigma2 must be non-negative")
        return SynthSpec(self.variant, n, s2, out.reshape(-1, 2), self.seed)


def _with_outliers(inliers: np.ndarray, outliers: np.ndarray) -> Dataset:
    points = np.vstack([inliers, outliers])
    labels = np.r_[np.zeros(len(inliers), bool), np.ones(len(outliers), bool)]
    return Dataset(points, labels, ("x1", "x2"))


def gen_two_gaussians(spec: SynthSpec = SynthSpec()) -> Dataset:
    spec = spec.resolved()
    rng = make_rng(spec.seed)
    std = math.sqrt(spec.noise_sigma2)
    clusters = [c + std * rng.standard_normal((spec.n, 2)) for c in TWO_GAUSSIAN_CENTERS]
    return _with_outliers(np.vstack(clusters), spec.outliers)


def gen_cosine(spec: SynthSpec = SynthSpec("cosine")) -> Dataset:
    spec = spec.resolved()
    rng = make_rng(spec.seed)
    x1 = rng.uniform(*COSINE_RANGE, size=spec.n)
    x2 = np.cos(x1) + math.sqrt(spec.noise_sigma2) * rng.standard_normal(spec.n)
    return _with_outliers(np.column_stack([x1, x2]), spec.outliers)


def generate(spec: SynthSpec) -> Dataset:
    if spec.variant == "two_gaussians":
        return gen_two_gaussians(spec)
    if spec.variant == "cosine":
        return gen_cosine(spec)
    raise ParameterError(f"unknown variant {spec.variant!r}")


def distance_to_cosine(point, lo: float = -10.0, hi: float = 30.0, steps: int = 200_001) -> float:
    """Euclidean distance from ``point`` to the curve ``x2 = cos(x1)`` (dense scan)."""
    t = np.linspace(lo, hi, steps)
    return float(np.min(np.hypot(t - point[0], np.cos(t) - point[1])))

"""Gaussian kernel and local kernel density estimates.

Two bandwidth conventions are supported for the exponent:

``paper``
    ``exp(-||x||^2 / (2 h))``, the default. It does not integrate to one.
``standard``
    ``exp(-||x||^2 / (2 h^2))``, which with the ``1 / h^d`` prefactor
    integrates to one.

The ``1 / h^d`` prefactor is applied in both cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Dataset,
    DimensionError,
    ParameterError,
    check_h,
    rowwise_sq_distances,
    sq_distances,
)
from .neighbors import NeighborSets

CONVENTIONS = ("paper", "standard")
_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class KernelSpec:
    h: float
    d: int
    convention: str = "paper"

    def __post_init__(self):
        check_h(self.h)
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"dimension must be a positive integer, got {self.d}")
        if self.convention not in CONVENTIONS:
            raise ParameterError(
                f"convention must be one of {CONVENTIONS}, got {self.convention!r}"
            )

    @property
    def norm(self) -> float:
        """``(2 pi)^(-d/2)``, the kernel's value at zero displacement."""
        return (2.0 * math.pi) ** (-self.d / 2.0)

    @property
    def scale(self) -> float:
        """``1 / h^d``."""
        return self.h ** (-self.d)

    def exponent_divisor(self) -> float:
        return 2.0 * self.h if self.convention == "paper" else 2.0 * self.h * self.h

    def kernel_of_sq(self, sq_dist):
        """Kernel value (without the ``1/h^d`` factor) for squared displacements."""
        vals = self.norm * np.exp(-np.asarray(sq_dist, dtype=np.float64) / self.exponent_divisor())
        return np.where(vals < _TINY, 0.0, vals)


def gaussian_kernel(u, spec: KernelSpec) -> float:
    """Kernel value for the displacement ``u = X - X_i`` (not pre-divided by h)."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.size != spec.d:
        raise DimensionError(f"displacement has {u.size} components, kernel expects {spec.d}")
    return float(spec.kernel_of_sq(float(np.dot(u, u))))


def local_density(data: Dataset, sets: NeighborSets, p: int, spec: KernelSpec) -> float:
    """Kernel density at point ``p`` using its extended neighbourhood plus itself."""
    if spec.d != data.dim:
        raise DimensionError(f"kernel dimension {spec.d} != data dimension {data.dim}")
    members = np.fromiter(sorted(sets.extended), dtype=np.intp)
    x = data.points
    sq = rowwise_sq_distances(x[members], np.broadcast_to(x[p], (members.size, data.dim)))
    total = spec.norm + float(np.sum(spec.kernel_of_sq(sq)))
    return spec.scale * total / (members.size + 1)


def density_field(data: Dataset, indptr: np.ndarray, indices: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Local density of every point given CSR neighbourhoods (see
    :func:`rdoskit.neighbors.extended_neighborhoods`)."""
    if spec.d != data.dim:
        raise DimensionError(f"kernel dimension {spec.d} != data dimension {data.dim}")
    n = data.n
    counts = np.diff(indptr)
    rows = np.repeat(np.arange(n), counts)
    x = data.points
    sq = rowwise_sq_distances(x[indices], x[rows])
    sums = np.bincount(rows, weights=spec.kernel_of_sq(sq), minlength=n)
    return spec.scale * (spec.norm + sums) / (counts + 1)


@dataclass(frozen=True)
class KernelMoments:
    integral: float
    first_moment: np.ndarray
    second_moment: float


def kernel_moment_check(spec: KernelSpec, resolution: int = 64) -> KernelMoments:
    """Integrate ``x -> K(x / h) / h^d`` numerically over ``R^d``.

    Uses tensor-product Gauss-Legendre quadrature with ``resolution`` nodes
    per axis on a box of 12 kernel standard deviations. Reports the zeroth
    moment, the first moment vector and the second moment ``E||x||^2``.
    Only ``d <= 3`` is supported.
    """
    if spec.d > 3:
        raise NotImplementedError("moment quadrature is limited to d <= 3")
    if resolution < 2:
        raise ParameterError("resolution must be at least 2")
    sigma = math.sqrt(spec.exponent_divisor() / 2.0)
    half = 12.0 * sigma
    nodes, weights = np.polynomial.legendre.leggauss(resolution)
    nodes = nodes * half
    weights = weights * half

    grids = np.meshgrid(*([nodes] * spec.d), indexing="ij")
    wgrid = np.ones_like(grids[0])
    for w in np.meshgrid(*([weights] * spec.d), indexing="ij"):
        wgrid = wgrid * w
    sq = sum(g**2 for g in grids)
    dens = spec.scale * spec.kernel_of_sq(sq) * wgrid
    return KernelMoments(
        integral=float(dens.sum()),
        first_moment=np.array([float((g * dens).sum()) for g in grids]),
        second_moment=float((sq * dens).sum()),
    )


def global_kde(sample: np.ndarray, at: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Plain KDE over the whole sample, evaluated at the rows of ``at``.

    Test utility only; scoring always uses local neighbourhoods.
    """
    sq = sq_distances(np.atleast_2d(at), np.atleast_2d(sample))
    return spec.scale * spec.kernel_of_sq(sq).mean(axis=1)

"""Between-cluster dispersion scores and weighted squared distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datatypes import (
    Dataset,
    FunctionalDataset,
    Partition,
    WeightFunction,
    WeightVector,
    check_finite,
    readonly_array,
)
from .errors import DimensionMismatch, GridMismatch, PartitionMismatch


@dataclass(frozen=True)
class DispersionVector:
    """Per-feature between-cluster separation scores.

    ``clamped`` records that floating-point cancellation produced small
    negative values that were clipped to zero.
    """

    b: np.ndarray
    clamped: bool = False

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        check_finite(b, "dispersion")
        object.__setattr__(self, "b", readonly_array(b))


@dataclass(frozen=True)
class DispersionFunction:
    """Pointwise between-cluster separation sampled on a grid.

    ``clamped`` records that floating-point cancellation produced small
    negative values that were clipped to zero.
    """

    grid: np.ndarray
    b: np.ndarray
    quad_weights: np.ndarray
    clamped: bool = False

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        check_finite(b, "dispersion")
        if np.any(b < 0.0):
            idx = int(np.argmax(b < 0.0))
            raise PartitionMismatch(f"negative dispersion at index {idx}")
        object.__setattr__(self, "grid", readonly_array(self.grid))
        object.__setattr__(self, "b", readonly_array(b))
        object.__setattr__(self, "quad_weights", readonly_array(self.quad_weights))


def _check_partition(part: Partition, n_obs: int) -> None:
    if part.n_obs != n_obs:
        raise PartitionMismatch(
            f"partition labels {part.n_obs} observations, dataset has {n_obs}"
        )


def _groupwise_moments(values: np.ndarray, part: Partition):
    """Per-cluster column sums and cluster sizes."""
    k = part.k
    sums = np.empty((k, values.shape[1]), dtype=np.float64)
    sizes = np.empty(k, dtype=np.float64)
    for j in range(1, k + 1):
        members = part.labels == j
        sizes[j - 1] = np.count_nonzero(members)
        sums[j - 1] = values[members].sum(axis=0)
    return sums, sizes


def bcss_per_feature(d: Dataset, part: Partition) -> DispersionVector:
    """Per-feature between-cluster sum of squares, pair-sum convention.

    Computed as the total mean pairwise squared difference minus its
    within-cluster counterpart, which collapses to the moment identity
    b_j = 2 * (sum_k S_kj^2 / N_k - S_j^2 / N). This equals twice the
    classical centroid-form BCSS; the thresholding solvers are invariant
    to that scale.
    """
    _check_partition(part, d.n_obs)
    sums, sizes = _groupwise_moments(d.values, part)
    total = d.values.sum(axis=0)
    between = (sums * sums / sizes[:, None]).sum(axis=0) - total * total / d.n_obs
    clamped = bool(np.any(between < 0.0))
    if clamped:
        between = np.maximum(between, 0.0)
    return DispersionVector(2.0 * between, clamped=clamped)


def bcss_pointwise(d: FunctionalDataset, part: Partition) -> DispersionFunction:
    """Pointwise between-cluster sum of squares on the dataset grid.

    Uses the half-pair-sum convention, which equals the classical
    centroid-form BCSS at every grid point. Tiny negative values from
    cancellation are clipped to zero and flagged.
    """
    _check_partition(part, d.n_obs)
    sums, sizes = _groupwise_moments(d.values, part)
    total = d.values.sum(axis=0)
    between = (sums * sums / sizes[:, None]).sum(axis=0) - total * total / d.n_obs
    clamped = bool(np.any(between < 0.0))
    if clamped:
        between = np.maximum(between, 0.0)
    return DispersionFunction(d.grid, between, d.quad_weights, clamped=clamped)


def _weights_array(w, expect: int, err, what: str) -> np.ndarray:
    arr = np.asarray(getattr(w, "w", w), dtype=np.float64)
    if arr.ndim != 1 or arr.size != expect:
        raise err(f"{what}: expected length {expect}, got {arr.size}")
    return arr


def weighted_sq_distance_mv(x_a, x_b, w) -> float:
    """Weighted squared Euclidean distance sum_j w_j (x_aj - x_bj)^2."""
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    if x_a.shape != x_b.shape or x_a.ndim != 1:
        raise DimensionMismatch(
            f"vectors have shapes {x_a.shape} and {x_b.shape}"
        )
    w_arr = _weights_array(w, x_a.size, DimensionMismatch, "weights")
    diff = x_a - x_b
    return float(np.sum(w_arr * diff * diff))


def weighted_sq_distance(f_a, f_b, w, quad_weights=None) -> float:
    """Quadrature approximation of the weighted squared L2 distance.

    ``w`` may be a WeightFunction (its quadrature masses are used unless
    ``quad_weights`` overrides them) or a plain sample vector, in which
    case ``quad_weights`` is required.
    """
    f_a = np.asarray(f_a, dtype=np.float64)
    f_b = np.asarray(f_b, dtype=np.float64)
    if f_a.shape != f_b.shape or f_a.ndim != 1:
        raise GridMismatch(f"curves have shapes {f_a.shape} and {f_b.shape}")
    if quad_weights is None:
        if isinstance(w, WeightFunction):
            quad_weights = w.quad_weights
        else:
            raise GridMismatch("quad_weights required when w is a bare vector")
    w_arr = _weights_array(w, f_a.size, GridMismatch, "weights")
    qw = np.asarray(quad_weights, dtype=np.float64)
    if qw.shape != f_a.shape:
        raise GridMismatch(
            f"quad weights length {qw.size} does not match curves ({f_a.size})"
        )
    diff = f_a - f_b
    return float(np.sum(qw * w_arr * diff * diff))


def weighted_objective(w, b) -> float:
    """Weighted between-cluster dispersion, the alternating loop's objective.

    For vector problems this is sum_j w_j b_j; for functional problems the
    quadrature form sum_g q_g w_g b_g.
    """
    if isinstance(b, DispersionFunction):
        w_arr = _weights_array(w, b.b.size, GridMismatch, "weights")
        return float(np.sum(b.quad_weights * w_arr * b.b))
    b_arr = np.asarray(getattr(b, "b", b), dtype=np.float64)
    w_arr = _weights_array(w, b_arr.size, DimensionMismatch, "weights")
    return float(np.dot(w_arr, b_arr))


__all__ = [
    "DispersionVector",
    "DispersionFunction",
    "bcss_per_feature",
    "bcss_pointwise",
    "weighted_sq_distance",
    "weighted_sq_distance_mv",
    "weighted_objective",
]

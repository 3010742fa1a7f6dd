"""Validated domain types.

Every type checks its invariants on construction and freezes its arrays,
so downstream code can assume well-formed inputs without re-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyCluster,
    EmptyData,
    GridMismatch,
    NonFinite,
    NonMonotoneGrid,
    SparsityOutOfRange,
)

# Relative tolerance for unit-norm checks.
EPS_NORM = 1e-9


def objective_slack(value: float) -> float:
    """Comparison slack for objective values: 1e-12 * (1 + |value|)."""
    return 1e-12 * (1.0 + abs(value))


def readonly_array(a, dtype=np.float64) -> np.ndarray:
    """Owned, C-contiguous, write-protected copy of ``a``."""
    arr = np.array(a, dtype=dtype, order="C", copy=True)
    arr.setflags(write=False)
    return arr


def check_finite(values: np.ndarray, what: str = "value") -> None:
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(np.atleast_1d(values)))[0]
        pos = tuple(int(i) for i in bad)
        raise NonFinite(f"non-finite {what} at index {pos[0] if len(pos) == 1 else pos}")


@dataclass(frozen=True)
class Dataset:
    """N observations of p real features, stored as an (N, p) matrix."""

    values: np.ndarray
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise EmptyData(f"expected a 2-d matrix, got ndim={values.ndim}")
        n, p = values.shape
        if n < 2:
            raise EmptyData(f"need at least 2 observations, got {n}")
        if p < 1:
            raise EmptyData("need at least 1 feature")
        check_finite(values)
        object.__setattr__(self, "values", readonly_array(values))
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != p:
                raise DimensionMismatch(
                    f"{len(names)} feature names for {p} features"
                )
            object.__setattr__(self, "feature_names", names)

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Trapezoidal quadrature masses for a strictly increasing grid.

    Endpoints get half the adjacent cell, interior points the average of
    their two cells; the masses sum to the domain length exactly.
    """
    qw = np.empty(grid.size, dtype=np.float64)
    qw[0] = (grid[1] - grid[0]) / 2.0
    qw[-1] = (grid[-1] - grid[-2]) / 2.0
    if grid.size > 2:
        qw[1:-1] = (grid[2:] - grid[:-2]) / 2.0
    return qw


@dataclass(frozen=True)
class FunctionalDataset:
    """N curves sampled on one shared strictly increasing grid.

    ``quad_weights`` is derived from the grid by the trapezoidal rule and is
    used everywhere an integral over the domain is needed.
    """

    grid: np.ndarray
    values: np.ndarray
    quad_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size < 2:
            raise EmptyData("grid needs at least 2 points")
        check_finite(grid, "grid point")
        diffs = np.diff(grid)
        if np.any(diffs <= 0.0):
            idx = int(np.argmax(diffs <= 0.0)) + 1
            raise NonMonotoneGrid(f"grid not strictly increasing at index {idx}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise EmptyData(f"expected an (N, G) matrix of curves, got ndim={values.ndim}")
        if values.shape[0] < 2:
            raise EmptyData(f"need at least 2 curves, got {values.shape[0]}")
        if values.shape[1] != grid.size:
            raise GridMismatch(
                f"curves sampled at {values.shape[1]} points, grid has {grid.size}"
            )
        check_finite(values)
        object.__setattr__(self, "grid", readonly_array(grid))
        object.__setattr__(self, "values", readonly_array(values))
        object.__setattr__(self, "quad_weights", readonly_array(trapezoid_weights(grid)))

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.grid.size

    @property
    def domain_measure(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    @property
    def max_spacing(self) -> float:
        return float(np.max(np.diff(self.grid)))


def validate_dataset(d):
    """Re-run all construction invariants on ``d`` and return it.

    Useful when arrays arrive from unchecked sources (e.g. deserialized
    objects) and the caller wants a validated handle.
    """
    if isinstance(d, Dataset):
        return Dataset(d.values, d.feature_names)
    if isinstance(d, FunctionalDataset):
        return FunctionalDataset(d.grid, d.values)
    raise TypeError(f"not a dataset: {type(d).__name__}")


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster labels in 1..k with no empty cluster."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size < 1:
            raise EmptyData("labels must be a non-empty 1-d sequence")
        if not np.issubdtype(labels.dtype, np.integer):
            as_int = labels.astype(np.int64)
            if not np.array_equal(as_int, labels):
                raise EmptyCluster("labels must be integers")
            labels = as_int
        k = int(self.k)
        if k < 1:
            raise EmptyCluster(f"k must be >= 1, got {k}")
        if labels.min() < 1 or labels.max() > k:
            raise EmptyCluster(f"labels must lie in 1..{k}")
        counts = np.bincount(labels.astype(np.int64), minlength=k + 1)
        missing = np.nonzero(counts[1 : k + 1] == 0)[0]
        if missing.size:
            raise EmptyCluster(f"cluster {int(missing[0]) + 1} is empty")
        object.__setattr__(self, "labels", readonly_array(labels, dtype=np.int64))
        object.__setattr__(self, "k", k)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(labels, int(labels.max()) if labels.size else 0)

    @property
    def n_obs(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k + 1)[1:]

    def members(self, cluster: int) -> np.ndarray:
        return np.nonzero(self.labels == cluster)[0]

    def key(self) -> bytes:
        return self.labels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.k, self.key()))


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Nonnegative feature weights with unit L2 norm and exactly m zeros.

    ``support_shrunk`` flags that nonpositive dispersion entries forced more
    zeros than requested, so m exceeds the level the caller asked for.
    """

    w: np.ndarray
    m: int
    support_shrunk: bool = False

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise EmptyData("weights must be a non-empty 1-d vector")
        check_finite(w, "weight")
        if np.any(w < 0.0):
            idx = int(np.argmax(w < 0.0))
            raise SparsityOutOfRange(f"negative weight at index {idx}")
        norm = float(np.sqrt(np.sum(w * w)))
        if norm > 1.0 + EPS_NORM:
            raise SparsityOutOfRange(f"weight L2 norm {norm} exceeds 1")
        m = int(self.m)
        n_zero = int(np.count_nonzero(w == 0.0))
        if n_zero != m:
            raise SparsityOutOfRange(f"m={m} but {n_zero} weights are zero")
        if not 0 <= m < w.size:
            raise SparsityOutOfRange(f"m={m} outside [0, {w.size})")
        object.__setattr__(self, "w", readonly_array(w))
        object.__setattr__(self, "m", m)

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.w > 0.0)[0]

    def l1(self) -> float:
        return float(np.sum(self.w))


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Nonnegative weight curve with unit quadrature L2 norm.

    m is the measure of the domain forced to zero weight; the zero set may
    undershoot m by at most one grid cell.
    """

    grid: np.ndarray
    w: np.ndarray
    m: float
    quad_weights: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        w = np.asarray(self.w, dtype=np.float64)
        qw = np.asarray(self.quad_weights, dtype=np.float64)
        if grid.ndim != 1 or grid.size < 2:
            raise EmptyData("grid needs at least 2 points")
        if w.shape != grid.shape or qw.shape != grid.shape:
            raise GridMismatch(
                f"lengths differ: grid {grid.size}, w {w.size}, quad {qw.size}"
            )
        check_finite(w, "weight")
        if np.any(w < 0.0):
            idx = int(np.argmax(w < 0.0))
            raise SparsityOutOfRange(f"negative weight at index {idx}")
        norm = float(np.sqrt(np.sum(qw * w * w)))
        if norm > 1.0 + EPS_NORM:
            raise SparsityOutOfRange(f"weight quadrature L2 norm {norm} exceeds 1")
        measure = float(np.sum(qw))
        m = float(self.m)
        if not 0.0 < m < measure:
            raise SparsityOutOfRange(f"m={m} outside (0, {measure})")
        zero_measure = float(np.sum(qw[w == 0.0]))
        cell = float(np.max(np.diff(grid)))
        if zero_measure < m - cell:
            raise SparsityOutOfRange(
                f"zero-weight measure {zero_measure} undershoots m={m} "
                f"by more than one grid cell ({cell})"
            )
        object.__setattr__(self, "grid", readonly_array(grid))
        object.__setattr__(self, "w", readonly_array(w))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "quad_weights", readonly_array(qw))

    def support_mask(self) -> np.ndarray:
        return self.w > 0.0

    def support_measure(self) -> float:
        return float(np.sum(self.quad_weights[self.w > 0.0]))


@dataclass(frozen=True, eq=False)
class SparseClusterResult:
    """Converged state of the alternating sparse clustering loop.

    objective_trace holds one weighted between-cluster dispersion value per
    outer iteration; it must be non-decreasing up to floating-point slack.
    """

    partition: Partition
    weights: object  # WeightVector or WeightFunction
    objective_trace: tuple
    iterations: int
    converged: bool

    def __post_init__(self):
        trace = tuple(float(v) for v in self.objective_trace)
        if not trace:
            raise EmptyData("objective trace is empty")
        for a, b in zip(trace, trace[1:]):
            if b < a - objective_slack(a):
                raise SparsityOutOfRange(
                    f"objective trace decreases: {a} -> {b}"
                )
        object.__setattr__(self, "objective_trace", trace)
        object.__setattr__(self, "iterations", int(self.iterations))
        object.__setattr__(self, "converged", bool(self.converged))

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]

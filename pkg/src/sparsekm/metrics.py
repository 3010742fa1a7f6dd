"""Partition comparison metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datatypes import Partition, readonly_array
from .errors import LengthMismatch


def _contingency(p1: Partition, p2: Partition) -> np.ndarray:
    table = np.zeros((p1.k, p2.k), dtype=np.int64)
    np.add.at(table, (p1.labels - 1, p2.labels - 1), 1)
    return table


def cer(p1: Partition, p2: Partition) -> float:
    """Clustering error rate: the fraction of observation pairs on which
    two partitions disagree about co-membership (one minus the Rand index).

    Computed from the contingency table in O(N + K1*K2) rather than over
    all pairs. 0 means identical up to relabeling; symmetric in its
    arguments.
    """
    if p1.n_obs != p2.n_obs:
        raise LengthMismatch(
            f"partitions label {p1.n_obs} and {p2.n_obs} observations"
        )
    n = p1.n_obs
    if n < 2:
        return 0.0
    table = _contingency(p1, p2)

    def pairs(counts):
        return int(np.sum(counts * (counts - 1) // 2))

    together_both = pairs(table)
    together_1 = pairs(p1.sizes().astype(np.int64))
    together_2 = pairs(p2.sizes().astype(np.int64))
    disagreements = together_1 + together_2 - 2 * together_both
    return disagreements / (n * (n - 1) // 2)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Cross-tabulation of true vs estimated cluster labels.

    ``counts[i, j]`` is the number of observations with true label i+1 and
    estimated label j+1. ``aligned()`` permutes estimated columns by greedy
    best-match so the dominant mass sits on the diagonal; the raw counts
    stay available as stored.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise LengthMismatch("confusion counts must be a 2-d table")
        object.__setattr__(self, "counts", readonly_array(counts, dtype=np.int64))

    @property
    def n_obs(self) -> int:
        return int(self.counts.sum())

    def column_order(self) -> list[int]:
        """Greedy matching: repeatedly take the largest remaining entry and
        pin its column to its row; leftover columns keep index order."""
        counts = self.counts
        n_true, n_est = counts.shape
        assigned = {}
        used_rows, used_cols = set(), set()
        flat = [
            (-counts[i, j], i, j)
            for i in range(n_true)
            for j in range(n_est)
        ]
        for neg, i, j in sorted(flat):
            if i in used_rows or j in used_cols:
                continue
            assigned[i] = j
            used_rows.add(i)
            used_cols.add(j)
            if len(used_rows) == min(n_true, n_est):
                break
        order = [assigned[i] for i in sorted(assigned)]
        order += [j for j in range(n_est) if j not in used_cols]
        return order

    def aligned(self) -> np.ndarray:
        return np.array(self.counts[:, self.column_order()])

    def off_diagonal(self) -> int:
        """Misclassified count under the greedy alignment."""
        aligned = self.aligned()
        diag = sum(aligned[i, i] for i in range(min(aligned.shape)))
        return int(aligned.sum()) - int(diag)


def confusion(p_true: Partition, p_est: Partition) -> ConfusionMatrix:
    """Confusion matrix between a reference and an estimated partition."""
    if p_true.n_obs != p_est.n_obs:
        raise LengthMismatch(
            f"partitions label {p_true.n_obs} and {p_est.n_obs} observations"
        )
    return ConfusionMatrix(_contingency(p_true, p_est))


__all__ = ["cer", "confusion", "ConfusionMatrix"]

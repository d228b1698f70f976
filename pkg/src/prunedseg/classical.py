"""Reference O(K n^2) dynamic programme over all last-change positions.

This module is the correctness oracle for :mod:`prunedseg.pruned`.  It does
no pruning: every ``C[k, t]`` is the minimum over all admissible last
change-points ``j`` of ``C[k-1, j] + cost(j+1 .. t)``.

Indexing is 1-based throughout: ``cost[k, t]`` is the optimal cost of the
first ``t`` observations in ``k`` segments, and ``backpointer[k, t] = j``
means the last segment is ``j+1 .. t``.  Row 0 and column 0 exist only so
that indices read naturally; undefined entries hold ``inf`` / ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .losses import LossKind, validate_signal


@dataclass(frozen=True)
class PrefixStats:
    """Cumulative sums with a leading zero, enabling O(1) segment costs."""

    loss: LossKind
    cum_count: np.ndarray
    cum_sum: np.ndarray
    cum_sumsq: np.ndarray

    @classmethod
    def from_signal(cls, y, loss: LossKind | str = LossKind.QUADRATIC) -> "PrefixStats":
        loss = LossKind.coerce(loss)
        y = validate_signal(y, loss)
        n = y.size
        count = np.arange(n + 1, dtype=np.int64)
        s = np.zeros(n + 1)
        q = np.zeros(n + 1)
        np.cumsum(y, out=s[1:])
        np.cumsum(y * y, out=q[1:])
        return cls(loss, count, s, q)

    @property
    def n(self) -> int:
        return self.cum_sum.size - 1

    def costs_before(self, j: np.ndarray, t: int) -> np.ndarray:
        """Vector of costs of segments ``j+1 .. t`` for every prefix index in ``j``."""
        m = t - j
        s = self.cum_sum[t] - self.cum_sum[j]
        if self.loss is LossKind.QUADRATIC:
            q = self.cum_sumsq[t] - self.cum_sumsq[j]
            return q - s * s / m
        out = np.zeros(np.shape(j))
        pos = s > 0
        sp = s[pos]
        out[pos] = sp - sp * np.log(sp / m[pos])
        return out

    def prefix_costs(self) -> np.ndarray:
        """Costs of ``1 .. t`` for ``t = 1 .. n``."""
        t = np.arange(1, self.n + 1)
        s = self.cum_sum[1:]
        if self.loss is LossKind.QUADRATIC:
            return self.cum_sumsq[1:] - s * s / t
        out = np.zeros(self.n)
        pos = s > 0
        out[pos] = s[pos] - s[pos] * np.log(s[pos] / t[pos])
        return out


def segment_cost(stats: PrefixStats, i: int, j: int) -> float:
    """Optimal cost of observations ``i .. j`` (1-based, inclusive)."""
    if not (1 <= i <= j <= stats.n):
        raise InputError(f"segment [{i}, {j}] outside 1..{stats.n}")
    return float(stats.costs_before(np.array([i - 1]), j)[0])


@dataclass(frozen=True)
class DPTable:
    """Optimal costs and backpointers for every ``k <= k_max`` and ``t <= n``."""

    cost: np.ndarray
    backpointer: np.ndarray
    loss: LossKind

    @property
    def k_max(self) -> int:
        return self.cost.shape[0] - 1

    @property
    def n(self) -> int:
        return self.cost.shape[1] - 1

    def final_costs(self) -> np.ndarray:
        """``C[k, n]`` for ``k = 1 .. k_max``."""
        return self.cost[1:, -1].copy()


def empty_tables(k_max: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    cost = np.full((k_max + 1, n + 1), np.inf)
    bp = np.full((k_max + 1, n + 1), -1, dtype=np.int64)
    cost[0, 0] = 0.0
    return cost, bp


def check_k_max(k_max: int, n: int) -> int:
    if isinstance(k_max, bool) or int(k_max) != k_max:
        raise InputError(f"k_max must be an integer, got {k_max!r}")
    k_max = int(k_max)
    if k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max}")
    if k_max > n:
        raise InputError(f"k_max={k_max} exceeds the number of observations n={n}")
    return k_max


def classical_dp(signal, loss: LossKind | str = LossKind.QUADRATIC, k_max: int = 2) -> DPTable:
    """Exact segmentation costs by exhaustive search over the last change-point.

    Ties between last change-points go to the smallest index.
    """
    loss = LossKind.coerce(loss)
    stats = PrefixStats.from_signal(signal, loss)
    n = stats.n
    k_max = check_k_max(k_max, n)
    cost, bp = empty_tables(k_max, n)
    cost[1, 1:] = stats.prefix_costs()
    bp[1, 1:] = 0
    for k in range(2, k_max + 1):
        prev = cost[k - 1]
        for t in range(k, n + 1):
            j = np.arange(k - 1, t)
            vals = prev[k - 1:t] + stats.costs_before(j, t)
            idx = int(np.argmin(vals))
            cost[k, t] = vals[idx]
            bp[k, t] = k - 1 + idx
    return DPTable(cost, bp, loss)

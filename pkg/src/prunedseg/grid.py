"""Finite-grid heuristic: track the best cost for a fixed set of last-segment means.

For one fixed ``mu`` the best cost of a ``k``-segmentation whose last segment
has parameter ``mu`` obeys the one-comparison recursion

    H[k, t+1](mu) = min(H[k, t](mu), C[k-1, t]) + loss(y_{t+1}, mu)

so running it for every grid value costs ``O(P n)`` per ``k``.  The result is
an upper bound on the exact optimum that can only improve as the grid is
refined.  Exact ``C[k-1, .]`` rows come from the pruned algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .classical import DPTable, check_k_max
from .errors import InputError
from .losses import LossKind, default_domain, validate_signal
from .pruned import _kernel, backtrack, default_backend, pruned_dp


@dataclass(frozen=True)
class GridResult:
    """Per-``k`` heuristic costs (index ``k``; entry 0 unused)."""

    cost: np.ndarray
    last_change: np.ndarray
    best_mu: np.ndarray
    grid: np.ndarray
    exact: DPTable

    @property
    def k_max(self) -> int:
        return self.cost.size - 1

    def change_points(self, k: int) -> list[int]:
        """Optimal ``k-1`` prefix segmentation followed by the grid's last change."""
        if not 1 <= k <= self.k_max:
            raise InputError(f"k={k} outside 1..{self.k_max}")
        if k == 1:
            return []
        tau = int(self.last_change[k])
        return backtrack(self.exact, k - 1, tau) + [tau]


def uniform_grid(lo: float, hi: float, size: int) -> np.ndarray:
    if size < 1:
        raise InputError(f"grid size must be >= 1, got {size}")
    if size == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, size)


def _grid_rows_python(y, loss, grid, exact, k_max):
    n = y.size
    out_cost = np.full(k_max + 1, np.inf)
    out_last = np.full(k_max + 1, -1, dtype=np.int64)
    out_mu = np.full(k_max + 1, np.nan)
    if loss is LossKind.QUADRATIC:
        def gamma(v):
            d = v - grid
            return d * d
    else:
        log_mu = np.log(grid)

        def gamma(v):
            return grid - v * log_mu

    for k in range(1, k_max + 1):
        if k == 1:
            H = np.zeros(grid.size)
            last = np.zeros(grid.size, dtype=np.int64)
            t0 = 1
        else:
            H = np.full(grid.size, exact[k - 1, k - 1])
            last = np.full(grid.size, k - 1, dtype=np.int64)
            t0 = k
        H += gamma(y[t0 - 1])
        for t in range(t0 + 1, n + 1):
            if k > 1:
                c = exact[k - 1, t - 1]
                better = c < H
                H[better] = c
                last[better] = t - 1
            H += gamma(y[t - 1])
        p = int(np.argmin(H))
        out_cost[k], out_last[k], out_mu[k] = H[p], last[p], grid[p]
    return out_cost, out_last, out_mu


def grid_heuristic(signal, loss: LossKind | str, k_max: int, grid: Sequence[float],
                   exact: Optional[DPTable] = None, backend: Optional[str] = None
                   ) -> GridResult:
    """Approximate ``C[k, n]`` for ``k = 1 .. k_max`` using only the grid means.

    ``exact`` may supply a precomputed table with at least ``k_max - 1`` rows;
    otherwise one is computed with :func:`~prunedseg.pruned.pruned_dp`.
    """
    loss = LossKind.coerce(loss)
    y = validate_signal(signal, loss)
    k_max = check_k_max(k_max, y.size)
    g = np.ascontiguousarray(grid, dtype=np.float64).ravel()
    if g.size == 0:
        raise InputError("grid is empty")
    if not np.all(np.isfinite(g)):
        raise InputError("grid values must be finite")
    if loss is LossKind.POISSON and g.min() <= 0:
        raise InputError("poisson grid values must be positive")
    need = max(k_max - 1, 1)
    if exact is None:
        exact = pruned_dp(y, loss, need, backend=backend)
    elif exact.k_max < need or exact.n != y.size:
        raise InputError("exact table too small for the requested k_max")
    backend = backend or default_backend()
    if backend == "compiled" and _kernel is not None:
        code = 0 if loss is LossKind.QUADRATIC else 1
        c, last, mu = _kernel.grid_rows(y, code, g, np.ascontiguousarray(exact.cost), k_max)
    else:
        c, last, mu = _grid_rows_python(y, loss, g, exact.cost, k_max)
    return GridResult(c, last, mu, g, exact)


def default_grid(signal, loss: LossKind | str, size: int) -> np.ndarray:
    """``size`` equally spaced values over the default domain of ``signal``."""
    loss = LossKind.coerce(loss)
    y = validate_signal(signal, loss)
    d = default_domain(y, loss)
    return uniform_grid(d.lo, d.hi, size)

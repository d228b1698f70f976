"""High-level entry point shared by the CLI and the benchmark harness."""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .classical import PrefixStats, classical_dp
from .errors import ConfigError, InputError
from .grid import default_grid, grid_heuristic
from .losses import LossKind, validate_signal
from .pruned import backtrack, pruned_dp, segment_bounds

ALGORITHMS = ("pruned", "classical", "grid")
DEFAULT_CLASSICAL_CAP = 20_000
CLASSICAL_CAP_ENV = "PRUNEDSEG_CLASSICAL_CAP"
DEFAULT_GRID_SIZE = 64


def classical_cap() -> int:
    """Largest ``n`` the O(K n^2) oracle may be run on (env override allowed)."""
    raw = os.environ.get(CLASSICAL_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_CLASSICAL_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"{CLASSICAL_CAP_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise ConfigError(f"{CLASSICAL_CAP_ENV} must be positive, got {cap}")
    return cap


@dataclass
class KSegmentation:
    k: int
    cost: float
    change_points: list[int]
    segment_means: list[float]
    # grid only: the heuristic value at the best grid mean (an upper bound on cost)
    heuristic_cost: Optional[float] = None


@dataclass
class SegmentationOutput:
    n: int
    loss: str
    k_max: int
    algorithm: str
    runtime_ms: float
    segmentations: list[KSegmentation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips the double exactly
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


def segment_means(stats: PrefixStats, change_points: list[int]) -> list[float]:
    """Per-segment optimum of the loss (the empirical mean for both losses)."""
    out = []
    for s, e in segment_bounds(change_points, stats.n):
        out.append(float((stats.cum_sum[e] - stats.cum_sum[s - 1]) / (e - s + 1)))
    return out


def segment(signal, k_max: int, loss: LossKind | str = LossKind.QUADRATIC,
            algorithm: str = "pruned", grid_size: Optional[int] = None,
            trace_path=None, backend: Optional[str] = None,
            cap: Optional[int] = None) -> SegmentationOutput:
    """Segment ``signal`` into ``1 .. k_max`` pieces and collect every solution."""
    loss = LossKind.coerce(loss)
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if grid_size is not None and algorithm != "grid":
        raise ConfigError("--grid-size only applies to the grid algorithm")
    if trace_path is not None and algorithm == "classical":
        raise ConfigError("the classical algorithm produces no trace")
    y = validate_signal(signal, loss)
    n = y.size
    cap = classical_cap() if cap is None else cap
    if algorithm == "classical" and n > cap:
        raise ConfigError(f"classical DP refused for n={n} > cap {cap} "
                          f"(raise {CLASSICAL_CAP_ENV} to override)")
    stats = PrefixStats.from_signal(y, loss)

    t0 = time.perf_counter()
    if algorithm == "classical":
        table = classical_dp(y, loss, k_max)
        costs = table.final_costs()
        cps = [backtrack(table, k) for k in range(1, table.k_max + 1)]
        trace = None
    elif algorithm == "pruned":
        table = pruned_dp(y, loss, k_max, trace=trace_path is not None, backend=backend)
        costs = table.final_costs()
        cps = [backtrack(table, k) for k in range(1, table.k_max + 1)]
        trace = table.trace
    else:
        size = DEFAULT_GRID_SIZE if grid_size is None else int(grid_size)
        if size < 1:
            raise ConfigError(f"--grid-size must be >= 1, got {size}")
        g = default_grid(y, loss, size)
        exact = pruned_dp(y, loss, max(int(k_max) - 1, 1),
                          trace=trace_path is not None, backend=backend)
        res = grid_heuristic(y, loss, k_max, g, exact=exact, backend=backend)
        cps = [res.change_points(k) for k in range(1, res.k_max + 1)]
        heuristic = res.cost[1:]
        costs = [_segmentation_cost(stats, cp) for cp in cps]
        trace = exact.trace
    elapsed = (time.perf_counter() - t0) * 1e3

    if trace is not None:
        trace.to_csv(trace_path)
    out = SegmentationOutput(n, loss.value, len(costs), algorithm, elapsed)
    for k, (c, cp) in enumerate(zip(costs, cps), 1):
        seg = KSegmentation(k, float(c), cp, segment_means(stats, cp))
        if algorithm == "grid":
            seg.heuristic_cost = float(heuristic[k - 1])
        out.segmentations.append(seg)
    return out


def _segmentation_cost(stats: PrefixStats, change_points: list[int]) -> float:
    total = 0.0
    for s, e in segment_bounds(change_points, stats.n):
        total += float(stats.costs_before(np.array([s - 1]), e)[0])
    return total


def resum_costs(signal, output: dict) -> list[float]:
    """Recompute each reported segmentation's cost from the raw signal."""
    loss = LossKind.coerce(output["loss"])
    stats = PrefixStats.from_signal(signal, loss)
    return [_segmentation_cost(stats, seg["change_points"]) for seg in output["segmentations"]]


def check_change_points(change_points: list[int], n: int) -> None:
    prev = 0
    for c in change_points:
        if not prev < c <= n - 1:
            raise InputError(f"change-points {change_points} not strictly increasing in 1..{n - 1}")
        prev = c

"""Exact multiple change-point detection by pruned dynamic programming.

>>> from prunedseg import pruned_dp, backtrack
>>> res = pruned_dp([0.0, 0.5, 0.4, -0.5], "quadratic", k_max=2)
>>> backtrack(res, 2)
[3]
"""

from .api import SegmentationOutput, segment
from .classical import DPTable, PrefixStats, classical_dp, segment_cost
from .errors import (ConfigError, DegenerateCostError, InputError, SegmentationError,
                     TraceFormatError)
from .grid import GridResult, grid_heuristic
from .intervals import Interval, IntervalSet, intersect, is_empty, subtract
from .losses import CostFn, LossKind, add, level_set, minimum, point_cost
from .pruned import (PrunedResult, PruneStats, StepTrace, Trace, available_backends, backtrack,
                     default_backend, pruned_dp, walk_row)
from .simulate import SignalSpec, add_noise, generate_means, simulate

__all__ = [
    "ConfigError", "CostFn", "DPTable", "DegenerateCostError", "GridResult", "InputError",
    "Interval", "IntervalSet", "LossKind", "PrefixStats", "PruneStats", "PrunedResult",
    "SegmentationError", "SegmentationOutput", "SignalSpec", "StepTrace", "Trace",
    "TraceFormatError", "add", "add_noise", "available_backends", "backtrack", "classical_dp",
    "default_backend", "generate_means", "grid_heuristic", "intersect", "is_empty", "level_set",
    "minimum", "point_cost", "pruned_dp", "segment", "segment_cost", "simulate", "subtract",
    "walk_row",
]

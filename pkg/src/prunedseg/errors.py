"""Exception hierarchy shared by the engine, the I/O layer and the CLI."""


class SegmentationError(ValueError):
    """Base class for every error raised by :mod:`prunedseg`."""

    kind = "segmentation_error"


class InputError(SegmentationError):
    """Invalid observations or arguments (non-finite values, bad k, ...)."""

    kind = "input_error"


class DegenerateCostError(SegmentationError):
    """A cost function has no finite minimum or is not strictly convex."""

    kind = "degenerate_cost"


class ConfigError(SegmentationError):
    """Malformed benchmark configuration or conflicting CLI flags."""

    kind = "config_error"


class TraceFormatError(SegmentationError):
    """A trace CSV does not follow the ``k,t,candidates,intervals,pruned`` layout."""

    kind = "trace_format"

"""Exact segmentation by pruned dynamic programming (functional pruning).

For each number of segments ``k >= 2`` the observations are swept left to
right while a list of *candidate* last change-points is maintained.  Every
candidate ``t'`` owns

* its cost ``h(mu) = C[k-1, t'] + sum_{i=t'+1}^{t} loss(y_i, mu)`` as a
  :class:`~prunedseg.losses.CostFn`, and
* the closed set of ``mu`` values on which it is the best candidate, as an
  :class:`~prunedseg.intervals.IntervalSet`.

On reaching position ``t`` the engine

1. opens candidate ``t-1`` with the constant cost ``C[k-1, t-1]`` and the
   whole domain as its provisional set;
2. for every older candidate computes ``I = {mu : h(mu) <= C[k-1, t-1]}``,
   shrinks the candidate's set to ``set & I`` (dropping the candidate for
   good if nothing is left) and removes ``I`` from the new candidate's set;
3. keeps the new candidate only if some of its set survived;
4. adds ``loss(y_t, .)`` to every live cost and records
   ``C[k, t] = min_l min_mu h_l(mu)`` with the minimising ``l`` as
   backpointer (ties to the smallest index).

Two interchangeable backends run this loop: a compiled kernel
(``prunedseg._kernel``) and the pure-Python code below.  The kernel is used
when it imports; set ``PRUNEDSEG_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .classical import DPTable, PrefixStats, check_k_max, empty_tables
from .errors import InputError
from .intervals import Interval, IntervalSet, intersect, subtract
from .losses import (CostFn, LossKind, default_domain, level_set_residual, minimum,
                     point_cost, validate_signal)

try:
    from . import _kernel
except ImportError:  # pragma: no cover - exercised only without a compiler
    _kernel = None

BACKENDS = ("compiled", "python")
TRACE_COLUMNS = ("k", "t", "candidates", "intervals", "pruned")


def available_backends() -> tuple[str, ...]:
    return BACKENDS if _kernel is not None else ("python",)


def default_backend() -> str:
    forced = os.environ.get("PRUNEDSEG_BACKEND", "").strip().lower()
    if forced:
        if forced not in BACKENDS:
            raise InputError(f"PRUNEDSEG_BACKEND={forced!r}; expected one of {BACKENDS}")
        if forced == "compiled" and _kernel is None:
            raise InputError("compiled backend requested but prunedseg._kernel is not built")
        return forced
    return "compiled" if _kernel is not None else "python"


@dataclass(frozen=True, slots=True)
class Candidate:
    last_change: int
    cost: CostFn
    winning: IntervalSet


@dataclass(frozen=True, slots=True)
class StepTrace:
    k: int
    t: int
    n_candidates: int
    n_intervals: int
    pruned: tuple[int, ...] = ()

    @property
    def within_bound(self) -> bool:
        return self.n_candidates < 1 or self.n_intervals <= 2 * self.n_candidates - 1


@dataclass(frozen=True, slots=True)
class StepSnapshot:
    """Full candidate state after processing position ``t`` of row ``k``."""

    k: int
    t: int
    candidates: tuple[Candidate, ...]
    pruned: tuple[int, ...]
    level_sets: tuple[tuple[int, Optional[Interval]], ...]
    cost: float
    backpointer: int
    max_residual: float = 0.0
    fallback: bool = False

    @property
    def n_intervals(self) -> int:
        return sum(len(c.winning) for c in self.candidates)


class Trace:
    """Per-step instrumentation stored column-wise.

    Iterating yields :class:`StepTrace` records; ``to_csv`` writes the
    ``k,t,candidates,intervals,pruned`` stream.
    """

    def __init__(self, k, t, candidates, intervals, pruned, pruned_indices):
        self.k = np.asarray(k, dtype=np.int64)
        self.t = np.asarray(t, dtype=np.int64)
        self.candidates = np.asarray(candidates, dtype=np.int64)
        self.intervals = np.asarray(intervals, dtype=np.int64)
        self.pruned = np.asarray(pruned, dtype=np.int64)
        self.pruned_indices = np.asarray(pruned_indices, dtype=np.int64)
        self._offsets = np.concatenate([[0], np.cumsum(self.pruned)])

    def __len__(self) -> int:
        return self.k.size

    def __getitem__(self, i: int) -> StepTrace:
        lo, hi = self._offsets[i], self._offsets[i + 1]
        return StepTrace(int(self.k[i]), int(self.t[i]), int(self.candidates[i]),
                         int(self.intervals[i]),
                         tuple(int(x) for x in self.pruned_indices[lo:hi]))

    def __iter__(self) -> Iterator[StepTrace]:
        for i in range(len(self)):
            yield self[i]

    def bound_violations(self) -> int:
        c = self.candidates
        return int(np.count_nonzero((c >= 1) & (self.intervals > 2 * c - 1)))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRACE_COLUMNS)
            w.writerows(zip(self.k.tolist(), self.t.tolist(), self.candidates.tolist(),
                            self.intervals.tolist(), self.pruned.tolist()))


@dataclass(frozen=True)
class PruneStats:
    """Aggregate instrumentation, collected on every run."""

    steps: int = 0
    candidate_updates: int = 0
    sum_candidates: int = 0
    max_candidates: int = 0
    max_intervals: int = 0
    bound_violations: int = 0
    max_root_residual: float = 0.0
    fallbacks: int = 0

    @property
    def mean_candidates(self) -> float:
        return self.sum_candidates / self.steps if self.steps else 0.0


@dataclass(frozen=True)
class PrunedResult(DPTable):
    stats: PruneStats = field(default_factory=PruneStats)
    trace: Optional[Trace] = None
    backend: str = "python"


def walk_row(y, loss: LossKind | str, prev_row, k: int,
             domain: Optional[Interval] = None) -> Iterator[StepSnapshot]:
    """Run row ``k`` in pure Python, yielding the candidate state after each step.

    ``prev_row`` holds ``C[k-1, t]`` for ``t = 0 .. n``.  This is the
    reference path; :func:`pruned_dp` uses it when the kernel is absent.
    """
    loss = LossKind.coerce(loss)
    y = validate_signal(y, loss)
    n = y.size
    if k < 2 or k > n:
        raise InputError(f"row k={k} must lie in 2..{n}")
    if domain is None:
        domain = default_domain(y, loss)
    lo, hi = domain
    full = IntervalSet((Interval(lo, hi),), Interval(lo, hi))
    points = [point_cost(loss, v) for v in y.tolist()]
    prev = [float(v) for v in prev_row]
    cands: list[Candidate] = []
    for t in range(k, n + 1):
        kappa = prev[t - 1]
        new_set = full
        kept: list[Candidate] = []
        pruned: list[int] = []
        levels: list[tuple[int, Optional[Interval]]] = []
        maxres = 0.0
        for cand in cands:
            ls = level_set_residual(cand.cost, kappa, lo, hi)
            if ls is None:
                levels.append((cand.last_change, None))
                pruned.append(cand.last_change)
                continue
            iv = Interval(ls[0], ls[1])
            maxres = max(maxres, ls[2])
            levels.append((cand.last_change, iv))
            s = intersect(cand.winning, iv)
            new_set = subtract(new_set, iv)
            if s.is_empty():
                pruned.append(cand.last_change)
            else:
                kept.append(Candidate(cand.last_change, cand.cost, s))
        fallback = not new_set and not kept
        if new_set or fallback:
            # numerical guard: the list is never allowed to run empty
            kept.append(Candidate(t - 1, CostFn.constant(loss, kappa),
                                  full if fallback else new_set))
        pt = points[t - 1]
        best, best_l = np.inf, -1
        cands = []
        for cand in kept:
            f = CostFn(loss, cand.cost.a + pt.a, cand.cost.b + pt.b, cand.cost.c + pt.c)
            cands.append(Candidate(cand.last_change, f, cand.winning))
            v = minimum(f, domain)[1]
            if v < best:
                best, best_l = v, cand.last_change
        yield StepSnapshot(k, t, tuple(cands), tuple(pruned), tuple(levels), best, best_l,
                           maxres, fallback)


def _rows_python(y, loss, domain, cost, bp, trace):
    steps = updates = sum_cand = max_cand = max_int = violations = fallbacks = 0
    maxres = 0.0
    cols: dict[str, list] = {c: [] for c in TRACE_COLUMNS}
    pruned_idx: list[int] = []
    for k in range(2, cost.shape[0]):
        n_live = 0
        for snap in walk_row(y, loss, cost[k - 1], k, domain):
            cost[k, snap.t] = snap.cost
            bp[k, snap.t] = snap.backpointer
            nc = len(snap.candidates)
            ni = snap.n_intervals
            updates += n_live
            n_live = nc
            steps += 1
            sum_cand += nc
            max_cand = max(max_cand, nc)
            max_int = max(max_int, ni)
            maxres = max(maxres, snap.max_residual)
            fallbacks += snap.fallback
            violations += ni > 2 * nc - 1
            if trace:
                for name, v in zip(TRACE_COLUMNS, (k, snap.t, nc, ni, len(snap.pruned))):
                    cols[name].append(v)
                pruned_idx.extend(snap.pruned)
    stats = dict(steps=steps, candidate_updates=updates, sum_candidates=sum_cand,
                 max_candidates=max_cand, max_intervals=max_int,
                 bound_violations=int(violations), max_root_residual=maxres,
                 fallbacks=int(fallbacks))
    arrays = dict(cols, pruned_indices=pruned_idx) if trace else None
    return stats, arrays


def pruned_dp(signal, loss: LossKind | str = LossKind.QUADRATIC, k_max: int = 2,
              trace: bool = False, backend: Optional[str] = None,
              domain: Optional[tuple[float, float]] = None) -> PrunedResult:
    """Optimal costs ``C[k, t]`` for all ``k <= k_max`` by functional pruning.

    Parameters
    ----------
    signal : array_like
        Observations ``y_1 .. y_n``.
    loss : {"quadratic", "poisson"}
    k_max : int
        Largest number of segments, ``1 <= k_max <= n``.
    trace : bool
        Keep a per-step :class:`Trace` (memory grows as ``k_max * n``).
        Aggregate :class:`PruneStats` are collected regardless.
    backend : {"compiled", "python"}, optional
        Defaults to :func:`default_backend`.
    domain : (float, float), optional
        Parameter range tracked by the winning sets; defaults to the data
        range (see :func:`~prunedseg.losses.default_domain`).  It must
        contain every segment optimum for the result to be exact.

    Returns
    -------
    PrunedResult
        Same table layout as :class:`~prunedseg.classical.DPTable`.
    """
    loss = LossKind.coerce(loss)
    y = validate_signal(signal, loss)
    n = y.size
    k_max = check_k_max(k_max, n)
    backend = backend or default_backend()
    if backend not in available_backends():
        raise InputError(f"backend {backend!r} unavailable; have {available_backends()}")
    dom = default_domain(y, loss) if domain is None else Interval(*map(float, domain))
    if not dom.lo <= dom.hi or (loss is LossKind.POISSON and dom.lo <= 0):
        raise InputError(f"invalid domain {tuple(dom)}")

    cost, bp = empty_tables(k_max, n)
    cost[1, 1:] = PrefixStats.from_signal(y, loss).prefix_costs()
    bp[1, 1:] = 0
    if backend == "compiled":
        code = 0 if loss is LossKind.QUADRATIC else 1
        stats, arrays = _kernel.pruned_rows(y, code, dom.lo, dom.hi, cost, bp, bool(trace))
    else:
        stats, arrays = _rows_python(y, loss, dom, cost, bp, trace)
    tr = Trace(**arrays) if arrays is not None else None
    return PrunedResult(cost, bp, loss, PruneStats(**stats), tr, backend)


def backtrack(result: DPTable, k: int, t: Optional[int] = None) -> list[int]:
    """Change-points of the optimal ``k``-segmentation of ``y_1 .. y_t``.

    Each change-point is the 1-based index of the last observation of a
    segment, so the list has ``k - 1`` strictly increasing entries.
    """
    n = result.n
    t = n if t is None else int(t)
    if not 1 <= k <= result.k_max:
        raise InputError(f"k={k} outside 1..{result.k_max}")
    if not k <= t <= n:
        raise InputError(f"t={t} outside {k}..{n}")
    out = []
    while k > 1:
        j = int(result.backpointer[k, t])
        out.append(j)
        k, t = k - 1, j
    out.reverse()
    return out


def segment_bounds(change_points: list[int], n: int) -> list[tuple[int, int]]:
    """1-based inclusive ``(start, end)`` pairs for the given change-points."""
    starts = [1] + [c + 1 for c in change_points]
    ends = list(change_points) + [n]
    return list(zip(starts, ends))

"""Timing and instrumentation harness: classical vs pruned vs grid.

Configuration files are line oriented.  Global ``key = value`` settings come
first, then one ``[scenario]`` block per input::

    algorithms = pruned, classical
    k_max = 5
    repetitions = 3
    trace = on
    output = report.csv
    trace_dir = traces

    [scenario]
    id = const-gauss
    shape = constant
    n = 10000
    noise = gaussian
    seed = 1

    [scenario]
    id = profile
    input = data/profile.csv
    format = csv
    column = log2ratio

A scenario either simulates a :class:`~prunedseg.simulate.SignalSpec` or
reads ``input``.  Simulated scenarios use seed ``seed + rep`` on repetition
``rep`` so every repetition sees fresh noise; all algorithms in one
repetition see the same signal.
"""

from __future__ import annotations

import csv
import logging
import statistics
import time
from collections import defaultdict
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .api import ALGORITHMS, DEFAULT_GRID_SIZE, classical_cap
from .classical import classical_dp
from .errors import ConfigError, SegmentationError, TraceFormatError
from .fileio import read_signal
from .grid import default_grid, grid_heuristic
from .losses import LossKind
from .pruned import TRACE_COLUMNS, pruned_dp
from .simulate import SignalSpec, simulate

log = logging.getLogger(__name__)

REPORT_COLUMNS = ("scenario", "algorithm", "n", "k_max", "rep", "wall_ms",
                  "final_cost", "max_candidates", "max_intervals")
SUMMARY_COLUMNS = ("k", "t", "max_intervals", "max_candidates", "runs")

_SPEC_KEYS = {f.name for f in fields(SignalSpec)}
_TRUE = {"1", "on", "true", "yes"}
_FALSE = {"0", "off", "false", "no"}


@dataclass
class Scenario:
    id: str
    spec: Optional[SignalSpec] = None
    input: Optional[Path] = None
    format: str = "floats"
    column: Union[int, str] = 0
    k_max: Optional[int] = None

    def signal(self, rep: int) -> np.ndarray:
        if self.spec is not None:
            return simulate(self.spec.with_seed(self.spec.seed + rep))
        return read_signal(self.input, self.format, self.column)

    def length(self) -> Optional[int]:
        return self.spec.n if self.spec is not None else None


@dataclass
class BenchConfig:
    scenarios: list[Scenario]
    algorithms: tuple[str, ...] = ("pruned",)
    k_max: int = 2
    repetitions: int = 1
    trace: bool = False
    loss: LossKind = LossKind.QUADRATIC
    grid_size: int = DEFAULT_GRID_SIZE
    classical_cap: int = field(default_factory=classical_cap)
    output: Optional[Path] = None
    trace_dir: Optional[Path] = None
    backend: Optional[str] = None

    def validate(self) -> None:
        if not self.scenarios:
            raise ConfigError("configuration defines no [scenario] block")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {self.k_max}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad or not self.algorithms:
            raise ConfigError(f"algorithms must be a non-empty subset of {ALGORITHMS}")
        ids = [s.id for s in self.scenarios]
        if len(set(ids)) != len(ids):
            raise ConfigError("scenario ids must be unique")
        for s in self.scenarios:
            n = s.length()
            if n is not None and "classical" in self.algorithms and n > self.classical_cap:
                raise ConfigError(f"scenario {s.id!r}: classical DP refused for n={n} "
                                  f"> cap {self.classical_cap}")
            if s.input is not None and not Path(s.input).is_file():
                raise ConfigError(f"scenario {s.id!r}: input {s.input} not found")


def _bool(key: str, value: str, lineno: int) -> bool:
    v = value.lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ConfigError(f"line {lineno}: {key} expects on/off, got {value!r}")


def _int(key: str, value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects an integer, got {value!r}") from None


def _build_scenario(raw: dict[str, tuple[str, int]], base: Path, index: int) -> Scenario:
    sid = raw.pop("id", (f"scenario{index}", 0))[0]
    k_max = raw.pop("k_max", None)
    k_max = _int("k_max", *k_max) if k_max else None
    if "input" in raw:
        path = Path(raw.pop("input")[0])
        fmt = raw.pop("format", ("floats", 0))[0]
        col = raw.pop("column", ("0", 0))[0]
        column: Union[int, str] = int(col) if col.lstrip("-").isdigit() else col
        if raw:
            key, (_, lineno) = next(iter(raw.items()))
            raise ConfigError(f"line {lineno}: key {key!r} not valid for file scenarios")
        return Scenario(sid, input=path if path.is_absolute() else base / path,
                        format=fmt, column=column, k_max=k_max)
    kwargs = {}
    for key, (value, lineno) in raw.items():
        if key not in _SPEC_KEYS:
            raise ConfigError(f"line {lineno}: unknown scenario key {key!r}")
        if key in ("n", "seed"):
            kwargs[key] = _int(key, value, lineno)
        elif key in ("amplitude", "frequency", "level"):
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} expects a number") from None
        else:
            kwargs[key] = value
    try:
        spec = SignalSpec(**kwargs)
    except SegmentationError as exc:
        raise ConfigError(f"scenario {sid!r}: {exc}") from None
    return Scenario(sid, spec=spec, k_max=k_max)


def parse_config(text: str, base: Union[str, Path] = ".") -> BenchConfig:
    """Parse the ``key = value`` / ``[scenario]`` format into a validated config."""
    base = Path(base)
    glob: dict[str, tuple[str, int]] = {}
    blocks: list[dict[str, tuple[str, int]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("["):
            if s != "[scenario]":
                raise ConfigError(f"line {lineno}: unknown section {s!r}")
            blocks.append({})
            continue
        key, sep, value = s.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {s!r}")
        key = key.strip().replace("-", "_")
        target = blocks[-1] if blocks else glob
        if key in target:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        target[key] = (value.strip(), lineno)

    cfg = BenchConfig(scenarios=[_build_scenario(b, base, i) for i, b in enumerate(blocks, 1)])
    for key, (value, lineno) in glob.items():
        if key == "algorithms":
            cfg.algorithms = tuple(a.strip() for a in value.split(",") if a.strip())
        elif key in ("k_max", "repetitions", "grid_size", "classical_cap"):
            setattr(cfg, key, _int(key, value, lineno))
        elif key == "trace":
            cfg.trace = _bool(key, value, lineno)
        elif key == "loss":
            try:
                cfg.loss = LossKind(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: unknown loss {value!r}") from None
        elif key in ("output", "trace_dir"):
            p = Path(value)
            setattr(cfg, key, p if p.is_absolute() else base / p)
        elif key == "backend":
            cfg.backend = value
        else:
            raise ConfigError(f"line {lineno}: unknown setting {key!r}")
    cfg.validate()
    return cfg


def load_config(path) -> BenchConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, base=path.parent)


@dataclass
class BenchRow:
    scenario: str
    algorithm: str
    n: int
    k_max: int
    rep: Union[int, str]
    wall_ms: float
    final_cost: float
    max_candidates: Optional[int] = None
    max_intervals: Optional[int] = None
    # not written to the report CSV
    candidate_updates: Optional[int] = None
    mean_candidates: Optional[float] = None
    bound_violations: Optional[int] = None

    def csv_row(self) -> list:
        return ["" if getattr(self, c) is None else getattr(self, c) for c in REPORT_COLUMNS]


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def medians(self) -> list[BenchRow]:
        groups: dict[tuple[str, str], list[BenchRow]] = defaultdict(list)
        for r in self.rows:
            groups[(r.scenario, r.algorithm)].append(r)
        out = []
        for (sid, alg), rs in groups.items():
            first = rs[0]
            out.append(BenchRow(
                sid, alg, first.n, first.k_max, "median",
                statistics.median(r.wall_ms for r in rs),
                statistics.median(r.final_cost for r in rs),
                None if first.max_candidates is None else max(r.max_candidates for r in rs),
                None if first.max_intervals is None else max(r.max_intervals for r in rs),
            ))
        return out

    def disagreements(self, rel_tol: float = 1e-8) -> list[tuple[str, int]]:
        """``(scenario, rep)`` pairs where classical and pruned final costs differ."""
        by_cell: dict[tuple[str, int], dict[str, float]] = defaultdict(dict)
        for r in self.rows:
            by_cell[(r.scenario, r.rep)][r.algorithm] = r.final_cost
        bad = []
        for cell, costs in by_cell.items():
            if "classical" in costs and "pruned" in costs:
                a, b = costs["classical"], costs["pruned"]
                if abs(a - b) > rel_tol * max(1.0, abs(a), abs(b)):
                    bad.append(cell)
        return bad

    def bound_violations(self) -> int:
        return sum(r.bound_violations or 0 for r in self.rows)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(REPORT_COLUMNS)
            for r in self.rows + self.medians():
                w.writerow(r.csv_row())


def _timed(fn: Callable):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1e3


def run_bench(config: BenchConfig, progress: Optional[Callable[[BenchRow], None]] = None
              ) -> BenchReport:
    """Run every (scenario, repetition, algorithm) cell and collect a report.

    Only the algorithm call is timed; signal generation and file I/O are not.
    """
    config.validate()
    report = BenchReport()
    if config.trace and config.trace_dir is not None:
        Path(config.trace_dir).mkdir(parents=True, exist_ok=True)
    for sc in config.scenarios:
        k_max = sc.k_max or config.k_max
        for rep in range(config.repetitions):
            y = sc.signal(rep)
            n = y.size
            if "classical" in config.algorithms and n > config.classical_cap:
                raise ConfigError(f"scenario {sc.id!r}: classical DP refused for n={n} "
                                  f"> cap {config.classical_cap}")
            for alg in config.algorithms:
                row = _run_cell(config, sc, rep, alg, y, k_max)
                report.rows.append(row)
                log.info("%s/%s rep %s: %.1f ms", sc.id, alg, rep, row.wall_ms)
                if progress is not None:
                    progress(row)
    bad = report.disagreements()
    if bad:
        log.warning("classical and pruned disagree on %s", bad)
    if config.output is not None:
        report.write_csv(config.output)
    return report


def _run_cell(config: BenchConfig, sc: Scenario, rep: int, alg: str, y, k_max: int) -> BenchRow:
    n = y.size
    if alg == "classical":
        table, ms = _timed(lambda: classical_dp(y, config.loss, k_max))
        return BenchRow(sc.id, alg, n, k_max, rep, ms, float(table.cost[k_max, n]))
    if alg == "pruned":
        res, ms = _timed(lambda: pruned_dp(y, config.loss, k_max, trace=config.trace,
                                           backend=config.backend))
        if res.trace is not None and config.trace_dir is not None:
            res.trace.to_csv(Path(config.trace_dir) / f"{sc.id}__rep{rep}.csv")
        st = res.stats
        return BenchRow(sc.id, alg, n, k_max, rep, ms, float(res.cost[k_max, n]),
                        st.max_candidates, st.max_intervals, st.candidate_updates,
                        st.mean_candidates, st.bound_violations)
    g = default_grid(y, config.loss, config.grid_size)

    def run_grid():
        exact = pruned_dp(y, config.loss, max(k_max - 1, 1), backend=config.backend)
        return grid_heuristic(y, config.loss, k_max, g, exact=exact, backend=config.backend)

    res, ms = _timed(run_grid)
    return BenchRow(sc.id, alg, n, k_max, rep, ms, float(res.cost[k_max]))


def _read_trace(path) -> Iterable[tuple[int, int, int, int]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TRACE_COLUMNS:
            raise TraceFormatError(f"{path}: header must be {','.join(TRACE_COLUMNS)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(TRACE_COLUMNS):
                raise TraceFormatError(f"{path}: line {lineno} has {len(row)} fields")
            try:
                k, t, c, i, _ = (int(x) for x in row)
            except ValueError:
                raise TraceFormatError(f"{path}: line {lineno} has a non-integer field") from None
            yield k, t, c, i


@dataclass
class TraceSummary:
    """Per-position maxima across repeated traces of the same configuration."""

    k: np.ndarray
    t: np.ndarray
    max_intervals: np.ndarray
    max_candidates: np.ndarray
    runs: np.ndarray

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SUMMARY_COLUMNS)
            w.writerows(zip(self.k.tolist(), self.t.tolist(), self.max_intervals.tolist(),
                            self.max_candidates.tolist(), self.runs.tolist()))

    def bound_violations(self) -> int:
        c = self.max_candidates
        return int(np.count_nonzero(self.max_intervals > 2 * c - 1))


def summarize_trace(paths: Iterable) -> TraceSummary:
    """Maximum interval and candidate counts per ``(k, t)`` across trace files."""
    acc: dict[tuple[int, int], list[int]] = {}
    nfiles = 0
    for p in paths:
        nfiles += 1
        for k, t, c, i in _read_trace(p):
            cur = acc.get((k, t))
            if cur is None:
                acc[(k, t)] = [i, c, 1]
            else:
                cur[0] = max(cur[0], i)
                cur[1] = max(cur[1], c)
                cur[2] += 1
    if nfiles == 0:
        raise TraceFormatError("no trace files given")
    keys = sorted(acc)
    arr = np.array([[k, t, *acc[(k, t)]] for k, t in keys], dtype=np.int64).reshape(-1, 5)
    return TraceSummary(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4])


"""``prunedseg`` command line: segment, simulate, bench, trace-summary.

Results go to stdout (or ``--output``) as JSON.  Failures print
``{"error": {"type": ..., "message": ...}}`` and exit non-zero: 2 for
usage/configuration problems, 1 for bad input data.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .api import ALGORITHMS, segment
from .bench import load_config, run_bench, summarize_trace
from .errors import ConfigError, SegmentationError
from .fileio import FORMATS, read_signal, write_json, write_signal
from .losses import LossKind
from .simulate import NOISES, SHAPES, SignalSpec, simulate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _emit(text: str, output) -> None:
    if output is None or str(output) == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(output).write_text(text + "\n")


def cmd_segment(args) -> int:
    y = read_signal(args.input, args.format, args.column)
    out = segment(y, args.k_max, args.loss, args.algorithm, grid_size=args.grid_size,
                  trace_path=args.trace, backend=args.backend)
    _emit(out.to_json(), args.output)
    return 0


def cmd_simulate(args) -> int:
    spec = SignalSpec(args.shape, args.n, args.amplitude, args.frequency, args.level,
                      args.noise, args.seed)
    y = simulate(spec)
    write_signal(args.output, y)
    write_json(str(args.output) + ".json", spec.to_dict())
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.output is not None:
        cfg.output = Path(args.output)
    report = run_bench(cfg)
    bad = report.disagreements()
    summary = {
        "rows": len(report.rows),
        "output": None if cfg.output is None else str(cfg.output),
        "disagreements": [list(c) for c in bad],
        "bound_violations": report.bound_violations(),
    }
    _emit(json.dumps(summary, indent=2), None)
    return 0 if not bad and not summary["bound_violations"] else 1


def cmd_trace_summary(args) -> int:
    summary = summarize_trace(args.traces)
    summary.write_csv(args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="prunedseg", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("segment", help="segment a numeric file into 1..K pieces")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=FORMATS, default="floats")
    s.add_argument("--column", default="0", help="CSV column index or header name")
    s.add_argument("--k-max", type=int, required=True)
    s.add_argument("--loss", choices=[k.value for k in LossKind], default="quadratic")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="pruned")
    s.add_argument("--trace", default=None, help="write the per-step trace CSV here")
    s.add_argument("--grid-size", type=int, default=None)
    s.add_argument("--backend", choices=("compiled", "python"), default=None)
    s.add_argument("--output", default=None)
    s.set_defaults(func=cmd_segment)

    m = sub.add_parser("simulate", help="write a seeded synthetic signal")
    m.add_argument("--shape", choices=SHAPES, default="constant")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--amplitude", type=float, default=1.0)
    m.add_argument("--frequency", type=float, default=1.0)
    m.add_argument("--level", type=float, default=0.0)
    m.add_argument("--noise", choices=NOISES, default="gaussian")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--output", required=True)
    m.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="run a benchmark configuration")
    b.add_argument("--config", required=True)
    b.add_argument("--output", default=None, help="override the report CSV path")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("trace-summary", help="per-position maxima over trace CSVs")
    t.add_argument("traces", nargs="+")
    t.add_argument("--output", required=True)
    t.set_defaults(func=cmd_trace_summary)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if getattr(args, "column", None) is not None and args.column.lstrip("-").isdigit():
            args.column = int(args.column)
        return args.func(args)
    except SegmentationError as exc:
        sys.stdout.write(json.dumps({"error": {"type": exc.kind, "message": str(exc)}}) + "\n")
        return 2 if isinstance(exc, ConfigError) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Reading and writing numeric signal files."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .errors import InputError

FORMATS = ("floats", "csv")


def _parse(text: str, lineno: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"line {lineno}: cannot parse {text.strip()!r} as a number") from None
    if not math.isfinite(v):
        raise InputError(f"line {lineno}: non-finite value {text.strip()!r}")
    return v


def read_signal(path, format: str = "floats", column: Union[int, str] = 0) -> np.ndarray:
    """Load observations from a local file.

    ``floats`` reads one number per line (blank lines and ``#`` comments are
    skipped).  ``csv`` reads one column, chosen by 0-based index or by header
    name; a non-numeric first row is taken as a header.
    """
    if format not in FORMATS:
        raise InputError(f"unknown format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    values: list[float] = []
    with fh:
        if format == "floats":
            for lineno, line in enumerate(fh, 1):
                s = line.strip()
                if not s or s.startswith("#"):
                    continue
                values.append(_parse(s, lineno))
        else:
            values = _read_csv_column(csv.reader(fh), column)
    if not values:
        raise InputError(f"{path}: no observations")
    return np.array(values, dtype=np.float64)


def _read_csv_column(reader, column) -> list[float]:
    values: list[float] = []
    idx = column if isinstance(column, int) else None
    if isinstance(column, str) and column.lstrip("-").isdigit():
        idx = int(column)
    for lineno, row in enumerate(reader, 1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if idx is None:
            try:
                idx = [h.strip() for h in row].index(column)
            except ValueError:
                raise InputError(f"line {lineno}: no column named {column!r}") from None
            continue
        if idx >= len(row) or idx < -len(row):
            raise InputError(f"line {lineno}: column {idx} missing")
        field = row[idx]
        if not values and lineno == 1:
            try:
                float(field)
            except ValueError:
                continue  # header row
        values.append(_parse(field, lineno))
    return values


def write_signal(path, y) -> None:
    """One value per line, shortest repr that round-trips exactly."""
    with open(path, "w") as fh:
        fh.writelines(f"{float(v)!r}\n" for v in np.asarray(y, dtype=np.float64).tolist())


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")

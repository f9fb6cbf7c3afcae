"""CSV and JSON serialization for trajectories, grids and reports.

Floats are written with 17 significant digits so a read-back reproduces the
binary64 values exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = ["FLOAT_FMT", "write_table_csv", "read_table_csv", "write_table_json", "write_json"]

FLOAT_FMT = "{:.17g}"


def _fmt(v) -> str:
    return FLOAT_FMT.format(float(v))


def write_table_csv(target, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Write ``rows`` under ``header`` to a path or an open text file."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_table_csv(fh, header, rows)
        return
    w = csv.writer(target, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


def read_table_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = [[float(v) for v in row] for row in r if row]
    return header, np.array(data, dtype=float).reshape(-1, len(header))


def write_table_json(target, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    payload = {"columns": list(header), "rows": [[float(v) for v in row] for row in rows]}
    write_json(target, payload)


def write_json(target, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)

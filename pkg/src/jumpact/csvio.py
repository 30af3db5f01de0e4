"""CSV reading and writing of log-price series."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np


class CsvFormatError(ValueError):
    pass


def read_log_prices(path, column: str = "logprice") -> np.ndarray:
    """Read one column of a headed, comma-separated file, in row order.

    Rows with unparseable or non-finite values are rejected, naming the line.
    """
    path = Path(path)
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, a header row is required") from None
        header = [h.strip() for h in header]
        if column not in header:
            raise CsvFormatError(f"{path}: no column {column!r} in header {header}")
        idx = header.index(column)
        bad = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                v = float(row[idx])
            except (IndexError, ValueError):
                bad.append(lineno)
                continue
            if not math.isfinite(v):
                bad.append(lineno)
                continue
            values.append(v)
    if bad:
        shown = ", ".join(map(str, bad[:10])) + (" ..." if len(bad) > 10 else "")
        raise CsvFormatError(f"{path}: missing or non-finite values on line(s) {shown}")
    return np.array(values, dtype=np.float64)


def write_log_prices(path, values) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "logprice"])
        for i, v in enumerate(values):
            w.writerow([i, repr(float(v))])

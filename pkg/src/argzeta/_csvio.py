"""Deterministic CSV and key-value output (17 significant digits)."""
from __future__ import annotations

import csv
import os


def fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "%.17g" % v
    if hasattr(v, "item"):  # numpy scalar
        return fmt(v.item())
    return str(v)


def write_rows(path_or_file, header, rows):
    """Write ``header`` then ``rows`` with fixed formatting and LF endings."""
    own = isinstance(path_or_file, (str, bytes, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    finally:
        if own:
            fh.close()


def format_summary(items):
    """Render a mapping as ``key = value`` lines in insertion order."""
    return "".join(f"{k} = {fmt(v)}\n" for k, v in items.items())

"""File formats: norms CSV, bound-report JSON, and plot-data CSV.

All emitters write LF line endings and 17-significant-digit floats so that
identical runs produce byte-identical files and parses round-trip exactly.
Overflowed bounds serialize as null in JSON (with the overflow flag set) and
as the sentinel ``INF`` in plot data; a zero measured value becomes ``-INF``.
"""

from __future__ import annotations

import json
import math
from typing import Sequence

from .bounds import (
    BOUND_NAMES,
    BoundReport,
    evaluate_bounds,
    inputs_from_series,
    measured_quantities,
)
from .norms import NORM_COLUMNS, NormSeries, series_from_rows

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "emit_timeseries",
    "load_timeseries",
    "emit_report",
    "load_report",
    "emit_plotdata",
]

REPORT_SCHEMA_VERSION = 1

_HEADER = ",".join(NORM_COLUMNS)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_timeseries(series: NormSeries, path: str) -> str:
    """Write the norm series as CSV with the fixed column order."""
    lines = [_HEADER]
    for s in series.samples:
        lines.append(",".join(_fmt(v) for v in s.as_row()))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def load_timeseries(path: str) -> NormSeries:
    with open(path, "r", newline="") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != _HEADER:
        raise ValueError(f"{path}: expected header {_HEADER!r}")
    rows = [ln.split(",") for ln in lines[1:]]
    for row in rows:
        if len(row) != len(NORM_COLUMNS):
            raise ValueError(f"{path}: malformed row {row}")
    return series_from_rows(rows)


def _json_num(x: float):
    return x if math.isfinite(x) else None


def _report_obj(r: BoundReport) -> dict:
    return {
        "name": r.name,
        "anchor": r.anchor,
        "ln_bound": None if (r.bound.overflow or r.bound.is_zero) else r.bound.ln_value,
        "overflow": r.bound.overflow,
        "ln_actual": None if r.actual.is_zero else r.actual.ln_value,
        "log_margin": _json_num(r.log_margin),
        "satisfied": r.satisfied,
        "inputs": r.inputs,
    }


def emit_report(reports: Sequence[BoundReport], path: str) -> str:
    """Write the versioned bound-report JSON document (stable key order)."""
    doc = {
        "version": REPORT_SCHEMA_VERSION,
        "reports": [_report_obj(r) for r in reports],
    }
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(doc, separators=(",", ":"), allow_nan=False))
        fh.write("\n")
    return path


def load_report(path: str) -> dict:
    with open(path, "r") as fh:
        doc = json.load(fh)
    if doc.get("version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported report version {doc.get('version')!r}")
    return doc


def emit_plotdata(
    series: NormSeries,
    path: str,
    nu: float,
    eps: float,
    t1: float,
    t2: float,
    alpha: float = 0.747,
) -> str:
    """Per-bound (t, ln_actual, ln_bound) columns over the verify window.

    Each recorded time t in [t1, t2] is treated as the interval end, so the
    bound columns trace the growth envelopes the formulas predict.
    """
    i1, i2 = series.window(t1, t2)
    times = [series.samples[i].t for i in range(i1, i2 + 1)]
    header = ["t"]
    for name in BOUND_NAMES:
        header += [f"{name}_ln_actual", f"{name}_ln_bound"]
    lines = [",".join(header)]
    for t in times:
        b = inputs_from_series(series, nu, eps, series.samples[i1].t, t, alpha)
        bounds = evaluate_bounds(series, b)
        actual = measured_quantities(series, b)
        cells = [_fmt(t)]
        for name in BOUND_NAMES:
            a = actual[name]
            cells.append("-INF" if a == 0.0 else _fmt(math.log(a)))
            bv = bounds[name]
            if bv.overflow:
                cells.append("INF")
            elif bv.is_zero:
                cells.append("-INF")
            else:
                cells.append(_fmt(bv.ln_value))
        lines.append(",".join(cells))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path

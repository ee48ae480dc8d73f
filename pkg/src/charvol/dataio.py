"""CSV and JSON input/output.

Readers validate hard (uniform grid, positive prices, named offending
rows) because estimator math silently misbehaves on ragged grids.
Writers serialize floats with 17 significant digits so files round-trip
to the exact same doubles, and always use '\n' line endings so repeated
runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .core import SampledPath

__all__ = [
    "DataFormatError",
    "format_float",
    "ingest_csv",
    "write_csv",
    "write_path_csv",
    "write_truth_csv",
    "write_estimates_csv",
    "write_summary_csv",
    "load_json",
]

_SPACING_RTOL = 1e-9


class DataFormatError(ValueError):
    """Input data violates the expected layout (grid, columns, signs)."""


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def ingest_csv(
    file,
    time_col: str = "time",
    price_col: str | None = None,
    logprice_col: str | None = None,
    delta: float | None = None,
) -> SampledPath:
    """Read a price CSV into a SampledPath of log prices.

    The file needs a header with a time column (days, or any equally
    spaced index) and either a price column (positive, converted to
    natural log) or a logprice column (used as is). With no explicit
    column names, 'logprice' is preferred over 'price'. Times must be
    strictly increasing with constant spacing (relative tolerance 1e-9);
    delta overrides the inferred spacing. Data rows are numbered from 1
    in error messages.
    """
    with open(file, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        names = reader.fieldnames or []
        if time_col not in names:
            raise DataFormatError(f"missing time column {time_col!r}")
        if price_col is not None and logprice_col is not None:
            raise DataFormatError("give either price_col or logprice_col, not both")
        col, is_log = None, False
        if logprice_col is not None:
            col, is_log = logprice_col, True
        elif price_col is not None:
            col, is_log = price_col, False
        elif "logprice" in names:
            col, is_log = "logprice", True
        elif "price" in names:
            col, is_log = "price", False
        if col is None or col not in names:
            raise DataFormatError(f"missing price column {col or 'price/logprice'!r}")

        times, vals = [], []
        for rownum, row in enumerate(reader, start=1):
            try:
                t = float(row[time_col])
                v = float(row[col])
            except (TypeError, ValueError):
                raise DataFormatError(f"row {rownum}: unparseable number") from None
            if not is_log:
                if not v > 0:
                    raise DataFormatError(f"row {rownum}: nonpositive price {v!r}")
                v = math.log(v)
            times.append(t)
            vals.append(v)

    if len(times) < 2:
        raise DataFormatError("need at least two data rows")
    t = np.array(times)
    d = np.diff(t)
    if d[0] <= 0:
        raise DataFormatError("row 2: time not strictly increasing")
    bad = np.nonzero(np.abs(d - d[0]) > _SPACING_RTOL * d[0])[0]
    if bad.size:
        raise DataFormatError(
            f"row {bad[0] + 2}: nonuniform time spacing "
            f"({float(d[bad[0]])!r} vs {float(d[0])!r} from the first pair)"
        )
    if delta is None:
        delta = (t[-1] - t[0]) / (len(t) - 1)
    return SampledPath(values=np.array(vals), delta=float(delta), t0=float(t[0]))


def write_csv(file, header, rows) -> None:
    """Write rows of already formatted strings under a header."""
    with open(file, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_path_csv(file, path: SampledPath) -> None:
    rows = [
        (format_float(path.t0 + i * path.delta), format_float(v))
        for i, v in enumerate(path.values)
    ]
    write_csv(file, ("time", "logprice"), rows)


def write_truth_csv(file, true_iv) -> None:
    rows = [(str(d), format_float(v)) for d, v in enumerate(true_iv)]
    write_csv(file, ("day", "true_iv"), rows)


def write_estimates_csv(file, rows) -> None:
    """rows: (day, estimator, value, avar, ci_low, ci_high, u_used, flags)."""
    out = [
        (
            str(day),
            tag,
            format_float(value),
            format_float(avar),
            format_float(lo),
            format_float(hi),
            format_float(u),
            "|".join(flags),
        )
        for day, tag, value, avar, lo, hi, u, flags in rows
    ]
    write_csv(
        file,
        ("day", "estimator", "value", "avar", "ci_low", "ci_high", "u_used", "flags"),
        out,
    )


def write_summary_csv(file, summaries) -> None:
    """One row per scenario x estimator; runtime is omitted (nondeterministic)."""
    rows = [
        (
            s.scenario_id,
            s.estimator_tag,
            str(s.replications),
            format_float(s.median_bias),
            format_float(s.mad),
            format_float(s.coverage),
            format_float(s.z_mean),
            format_float(s.z_var),
        )
        for s in summaries
    ]
    write_csv(
        file,
        (
            "scenario_id",
            "estimator",
            "replications",
            "median_bias",
            "mad",
            "coverage",
            "z_mean",
            "z_var",
        ),
        rows,
    )


def load_json(file) -> dict:
    with open(file, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if not isinstance(doc, dict):
        raise DataFormatError("top-level JSON value must be an object")
    return doc

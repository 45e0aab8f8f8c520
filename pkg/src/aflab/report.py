"""Byte-deterministic JSON and CSV reports.

Every check result serializes with the fields, in this order::

    id, kind, lhs, rhs, residual_or_slack, tol, verdict, hypothesis_status, grid

where ``grid`` is ``{size, refined, refinement_delta}``.  Floats are written
with 17 significant digits (``format(x, ".17g")``); non-finite values become
``null`` in JSON and an empty cell in CSV.  CSV flattens ``grid`` into the
columns ``grid_size, grid_refined, grid_refinement_delta``.
"""

import csv
import io
import json
import math

import numpy as np

FIELDS = ("id", "kind", "lhs", "rhs", "residual_or_slack", "tol", "verdict", "hypothesis_status", "grid")
GRID_FIELDS = ("size", "refined", "refinement_delta")
CSV_COLUMNS = FIELDS[:-1] + tuple(f"grid_{f}" for f in GRID_FIELDS)


def format_float(x):
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else None


def _scalar(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = format_float(v)
        return "null" if s is None else s
    return json.dumps(str(v), ensure_ascii=True)


def dumps(obj, indent=0):
    """JSON text with insertion-ordered keys and .17g floats."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [inner + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _scalar(obj)


def result_record(res):
    """Ordered dict of one CheckResult in the fixed schema."""
    grid = {f: res.grid.get(f) for f in GRID_FIELDS}
    rec = {f: getattr(res, f) for f in FIELDS[:-1]}
    rec["grid"] = grid
    return rec


def summary(results):
    counts = {"pass": 0, "fail": 0, "skipped-hypothesis": 0}
    for r in results:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    return counts


def json_report(results, meta=None):
    doc = dict(meta or {})
    doc["summary"] = summary(results)
    doc["results"] = [result_record(r) for r in results]
    return dumps(doc) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        s = format_float(v)
        return "" if s is None else s
    return str(v)


def csv_table(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def csv_report(results):
    rows = []
    for r in results:
        rec = result_record(r)
        rows.append([rec[f] for f in FIELDS[:-1]] + [rec["grid"][f] for f in GRID_FIELDS])
    return csv_table(CSV_COLUMNS, rows)

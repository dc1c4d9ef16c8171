"""Flat-file emission: CSV with 17 significant digits, JSON with a config echo."""

import csv
import io
import json
import math

import numpy as np


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def render_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(columns, rows, config):
    data = {name: [_json_value(row[i]) for row in rows] for i, name in enumerate(columns)}
    payload = {"config": config, "columns": list(columns), "data": data}
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def render(columns, rows, fmt, config):
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "json":
        return render_json(columns, rows, config)
    raise ValueError(f"unknown output format {fmt!r}")


def read_csv(text):
    """Parse ``render_csv`` output back into (columns, rows of strings)."""
    r = list(csv.reader(io.StringIO(text)))
    return r[0], r[1:]

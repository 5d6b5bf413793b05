"""CSV and JSON serialisation. Floats are written with 17 significant digits."""
from __future__ import annotations

import csv
import io
import json

import numpy as np

from .distribution import CurveSamples
from .errors import NullBundleError, ParseError
from .spacetime import Chart

CURVE_COLUMNS = ["t", "x0", "x1", "x2", "x3", "dx0", "dx1", "dx2", "dx3"]
BUNDLE_COLUMNS = ["t", "x0", "x1", "x2", "x3", "sigma", "v1", "v2", "v3"]


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.17g" % float(x)


def write_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def read_csv(text: str):
    """Header and float rows; raises ParseError on malformed input."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty CSV input")
    header = [h.strip() for h in rows[0]]
    data = []
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"line {n}: expected {len(header)} fields, got {len(row)}")
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            raise ParseError(f"line {n}: {exc}") from None
    return header, np.array(data, dtype=float).reshape(-1, len(header))


def curve_to_csv(curve: CurveSamples) -> str:
    rows = np.column_stack([curve.t, curve.x, curve.dx])
    return write_csv(CURVE_COLUMNS, rows)


def curve_from_csv(text: str, chart: Chart) -> CurveSamples:
    """Columns t, x0..x3 and optionally dx0..dx3 (filled by finite differences if absent)."""
    header, data = read_csv(text)
    idx = {name: i for i, name in enumerate(header)}
    missing = [c for c in CURVE_COLUMNS[:5] if c not in idx]
    if missing:
        raise ParseError(f"curve CSV lacks columns {missing}")
    t = data[:, idx["t"]]
    x = data[:, [idx[c] for c in CURVE_COLUMNS[1:5]]]
    try:
        if all(c in idx for c in CURVE_COLUMNS[5:]):
            return CurveSamples(chart, t, x, data[:, [idx[c] for c in CURVE_COLUMNS[5:]]])
        return CurveSamples.from_positions(chart, t, x)
    except NullBundleError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def bundle_curve_to_csv(t, x, sigma, v, extra_columns=(), extra=None) -> str:
    cols = BUNDLE_COLUMNS + list(extra_columns)
    extra = None if extra is None else np.asarray(extra).reshape(len(t), -1)
    rows = []
    for i in range(len(t)):
        row = [float(t[i]), *map(float, x[i]), int(sigma[i]), *map(float, v[i])]
        if extra is not None:
            row += [float(e) for e in extra[i]]
        rows.append(row)
    return write_csv(cols, rows)


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None

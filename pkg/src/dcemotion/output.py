"""File emission: round-trippable CSV, sorted JSON and small static SVG charts.

All writers go through :func:`atomic_write` (temporary file in the target
directory, then ``os.replace``), so readers never observe partial files.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["atomic_write", "write_csv", "read_csv", "write_json", "svg_line_chart"]

_FLOAT_FMT = "%.17g"


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return _FLOAT_FMT % v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, columns):
    """Write equal-length columns; floats use 17 significant digits."""
    columns = [np.asarray(c) for c in columns]
    n = {c.shape[0] for c in columns}
    if len(n) != 1:
        raise ValueError("columns must have equal length")
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_cell(v) for v in row))
    return atomic_write(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Read a CSV written by :func:`write_csv` into ``{column: array}``.

    Numeric columns become float arrays; anything else stays as strings.
    """
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        try:
            out[name] = np.array([float(x) for x in col])
        except ValueError:
            out[name] = np.array(col, dtype=object)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path, data):
    return atomic_write(path, json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")


def _ticks(lo, hi, n=5):
    if hi == lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _fmt(x):
    return "%.6g" % x


_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def svg_line_chart(path, x, series, *, title="", xlabel="", ylabel="", annotations=(),
                   markers=(), width=720, height=440):
    """Static line chart.

    ``series`` maps a legend label to y values; ``annotations`` are text
    lines printed in the upper-left corner; ``markers`` are ``(label, y)``
    horizontal reference lines (for example a predicted asymptote).
    """
    x = np.asarray(x, dtype=float)
    ml, mr, mt, mb = 80, 20, 40, 60
    pw, ph = width - ml - mr, height - mt - mb
    ys = [np.asarray(v, dtype=float) for v in series.values()]
    allv = np.concatenate([y[np.isfinite(y)] for y in ys] + [np.array([m[1] for m in markers])])
    ylo, yhi = (float(allv.min()), float(allv.max())) if allv.size else (0.0, 1.0)
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    xlo, xhi = float(x.min()), float(x.max())
    if xhi == xlo:
        xhi = xlo + 1.0

    def px(v):
        return ml + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return mt + (yhi - v) / (yhi - ylo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{title}</text>',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for v in _ticks(xlo, xhi):
        X = px(v)
        out.append(f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" y2="{mt + ph + 5}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{mt + ph + 18}" text-anchor="middle">{_fmt(v)}</text>')
    for v in _ticks(ylo, yhi):
        Y = py(v)
        out.append(f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(v)}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 15}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="18" y="{mt + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {mt + ph / 2:.1f})">{ylabel}</text>')
    if ylo < 0 < yhi:
        out.append(f'<line x1="{ml}" y1="{py(0):.2f}" x2="{ml + pw}" y2="{py(0):.2f}" '
                   f'stroke="#bbbbbb"/>')
    for k, (label, y) in enumerate(series.items()):
        y = np.asarray(y, dtype=float)
        ok = np.isfinite(y)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
        color = _COLORS[k % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = mt + 16 + 16 * k
        out.append(f'<line x1="{ml + pw - 130}" y1="{ly - 4}" x2="{ml + pw - 110}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw - 105}" y="{ly}">{label}</text>')
    for label, yv in markers:
        Y = py(yv)
        out.append(f'<line x1="{ml}" y1="{Y:.2f}" x2="{ml + pw}" y2="{Y:.2f}" stroke="#555555" '
                   f'stroke-dasharray="6 4"/>')
        out.append(f'<text x="{ml + 6}" y="{Y - 4:.2f}" fill="#555555">{label}</text>')
    for k, text in enumerate(annotations):
        out.append(f'<text x="{ml + 8}" y="{mt + 16 + 16 * k}" class="annotation">{text}</text>')
    out.append("</svg>")
    return atomic_write(path, "\n".join(out) + "\n")

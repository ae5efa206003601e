"""Trajectory files: CSV and JSON tables, plus minimal standalone SVG line plots."""

from __future__ import annotations

import csv
import io
import json
import math
import threading
from collections import defaultdict
from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

TRAJECTORY_COLUMNS = ("tau", "x", "p", "var_x", "var_p", "cov_xp", "product")

# writes to one path are serialized; different paths proceed independently
_path_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)


def _fmt(v) -> str:
    return "%.17g" % float(v)


def table_to_csv(columns: Mapping[str, Sequence[float]]) -> str:
    names = list(columns)
    rows = zip(*(columns[n] for n in names))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(columns: Mapping[str, Sequence[float]]) -> str:
    return json.dumps({n: [float(v) for v in columns[n]] for n in columns}, indent=1) + "\n"


def write_table(columns: Mapping[str, Sequence[float]], path, fmt: str = "csv") -> None:
    """Write a column table to ``path`` (``'-'`` or ``None`` for stdout)."""
    text = table_to_csv(columns) if fmt == "csv" else table_to_json(columns)
    if path in (None, "-"):
        print(text, end="")
        return
    path = Path(path)
    with _path_locks[str(path.resolve())]:
        path.write_text(text)


def read_table(path) -> dict[str, np.ndarray]:
    """Read back a table written by :func:`write_table`; the format follows the suffix."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return {k: np.asarray(v, dtype=float) for k, v in json.loads(text).items()}
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in row] for row in body]).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def svg_line_plot(x: Sequence[float], y: Sequence[float], xlabel: str, ylabel: str, title: str = "",
                  width: int = 640, height: int = 400) -> str:
    """A single polyline with labelled axes and min/max tick values."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = (float(x.min()), float(x.max())) if x.size else (0.0, 1.0)
    y0, y1 = (float(y.min()), float(y.max())) if y.size else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        pad = max(abs(y0) * 0.05, 1e-12)
        y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
    t = escape
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{points}"/>',
        f'<text x="{left}" y="{top + ph + 18}" text-anchor="middle">{_tick(x0)}</text>',
        f'<text x="{left + pw}" y="{top + ph + 18}" text-anchor="middle">{_tick(x1)}</text>',
        f'<text x="{left - 6}" y="{top + ph}" text-anchor="end">{_tick(y0)}</text>',
        f'<text x="{left - 6}" y="{top + 10}" text-anchor="end">{_tick(y1)}</text>',
        f'<text x="{left + pw / 2}" y="{height - 12}" text-anchor="middle">{t(xlabel)}</text>',
        f'<text x="16" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2})">{t(ylabel)}</text>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="18" text-anchor="middle">{t(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _tick(v: float) -> str:
    if v == 0 or 1e-3 <= abs(v) < 1e4:
        return f"{v:.4g}"
    exp = int(math.floor(math.log10(abs(v))))
    return f"{v / 10**exp:.3g}e{exp}"


def write_plot(path, *args, **kwargs) -> None:
    path = Path(path)
    with _path_locks[str(path.resolve())]:
        path.write_text(svg_line_plot(*args, **kwargs))

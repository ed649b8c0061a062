"""File emission: one CSV per metric table, a JSON summary, optional SVG
line plots. The SVG writer is self-contained (fixed 800x600 canvas, optional
log-x, CI band as a shaded polygon) so the artifact needs no plotting stack.
"""

from __future__ import annotations

import csv
import math
import os
from typing import Iterable

from .records import RunRecord

SVG_W, SVG_H = 800, 600
MARGIN = 70.0


def _fmt(value) -> str:
    # shortest round-trip decimal for floats; everything else verbatim
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(record: RunRecord, out_dir: str, formats: Iterable[str] = ("csv", "json")) -> list[str]:
    """Write the record's artifacts; returns the list of paths written."""
    formats = set(formats)
    os.makedirs(out_dir, exist_ok=True)
    prefix = f"{record.experiment}-{record.config_hash}"
    written: list[str] = []

    if "csv" in formats:
        for table in record.metrics:
            path = os.path.join(out_dir, f"{prefix}-{table.name}.csv")
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(table.columns)
                for row in table.rows:
                    writer.writerow([_fmt(v) for v in row])
            written.append(path)

    if "json" in formats:
        path = os.path.join(out_dir, f"{prefix}-summary.json")
        with open(path, "w") as fh:
            fh.write(record.to_json())
            fh.write("\n")
        written.append(path)

    if "svg" in formats:
        for table in record.metrics:
            if not table.plot or not table.rows:
                continue
            path = os.path.join(out_dir, f"{prefix}-{table.name}.svg")
            with open(path, "w") as fh:
                fh.write(_render_svg(table))
            written.append(path)

    return written


def _render_svg(table) -> str:
    plot = table.plot
    cols = {c: i for i, c in enumerate(table.columns)}
    xs = [float(r[cols[plot["x"]]]) for r in table.rows]
    ys = [float(r[cols[plot["y"]]]) for r in table.rows]
    logx = bool(plot.get("logx"))
    if logx:
        xs = [math.log(x) for x in xs]
    lo = hi = None
    if plot.get("lo") in cols and plot.get("hi") in cols:
        lo = [float(r[cols[plot["lo"]]]) for r in table.rows]
        hi = [float(r[cols[plot["hi"]]]) for r in table.rows]

    ymin = min(lo) if lo else min(ys)
    ymax = max(hi) if hi else max(ys)
    xmin, xmax = min(xs), max(xs)
    if xmax == xmin:
        xmax = xmin + 1.0
    if ymax == ymin:
        ymax = ymin + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad

    def px(x: float) -> float:
        return MARGIN + (x - xmin) / (xmax - xmin) * (SVG_W - 2 * MARGIN)

    def py(y: float) -> float:
        return SVG_H - MARGIN - (y - ymin) / (ymax - ymin) * (SVG_H - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
        f'viewBox="0 0 {SVG_W} {SVG_H}">',
        f'<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>',
    ]
    if lo is not None:
        band = [f"{px(x):.2f},{py(v):.2f}" for x, v in zip(xs, lo)]
        band += [f"{px(x):.2f},{py(v):.2f}" for x, v in zip(reversed(xs), reversed(hi))]
        parts.append(f'<polygon points="{" ".join(band)}" fill="#9ecae1" opacity="0.5"/>')
    line = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{line}" fill="none" stroke="#08519c" stroke-width="2"/>')
    # axes
    parts.append(
        f'<line x1="{MARGIN}" y1="{SVG_H-MARGIN}" x2="{SVG_W-MARGIN}" y2="{SVG_H-MARGIN}" '
        'stroke="black"/>'
    )
    parts.append(f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{SVG_H-MARGIN}" stroke="black"/>')
    for k in range(5):
        fx = xmin + k * (xmax - xmin) / 4
        fy = ymin + k * (ymax - ymin) / 4
        label_x = f"{math.exp(fx):.4g}" if logx else f"{fx:.4g}"
        parts.append(
            f'<text x="{px(fx):.1f}" y="{SVG_H-MARGIN+20:.1f}" font-size="12" '
            f'text-anchor="middle">{label_x}</text>'
        )
        parts.append(
            f'<text x="{MARGIN-8:.1f}" y="{py(fy)+4:.1f}" font-size="12" '
            f'text-anchor="end">{fy:.4g}</text>'
        )
    xl = plot["x"] + (" (log scale)" if logx else "")
    parts.append(
        f'<text x="{SVG_W/2}" y="{SVG_H-20}" font-size="14" text-anchor="middle">{xl}</text>'
    )
    parts.append(
        f'<text x="20" y="{SVG_H/2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 20 {SVG_H/2})">{plot["y"]}</text>'
    )
    parts.append(f'<text x="{SVG_W/2}" y="30" font-size="16" text-anchor="middle">{table.name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

"""Dataset serialization: CSV, JSON, and SVG emission plus matching readers.

Numbers are written in their shortest round-trip decimal form (repr), so
every emitted file re-parses to bit-identical floats.  CSV uses a header
row, LF line endings, UTF-8.  Cells that are not numbers (domain sentinels,
regime labels) stay strings on read.
"""
from __future__ import annotations

import json
import math
from datetime import datetime, timezone


def format_number(v) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(v))


def write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for cell in row:
                if isinstance(cell, str):
                    cells.append(cell)
                elif isinstance(cell, int):
                    cells.append(str(cell))
                else:
                    cells.append(format_number(cell))
            fh.write(",".join(cells) + "\n")


def read_csv(path):
    """Parse a CSV written by write_csv; numeric cells become floats."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = lines[0].split(",") if lines else []
    rows = []
    for line in lines[1:]:
        row = []
        for cell in line.split(","):
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(row)
    return header, rows


def write_json(path, document: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(document, fh, indent=2, allow_nan=False)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def provenance_block(command: str, config: dict, version: str, backend: str,
                     failures: list | None = None) -> dict:
    """Run provenance: the echoed config alone reproduces the run."""
    block = {
        "tool": "nontwist",
        "version": version,
        "backend": backend,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "command": command,
        "config": config,
    }
    if failures is not None:
        block["failures"] = failures
    return block


# ---------------------------------------------------------------------------
# SVG (1.1): one polyline per trace, markers for equilibria, symmetry lines.

_SOURCE_COLORS = {
    "flow": "#1f77b4",
    "separatrix": "#d62728",
    "contour": "#2ca02c",
    "map_orbit": "#7f7f7f",
}


class _SvgMapper:
    def __init__(self, window, width=900, height=600, margin=40):
        self.w = window
        self.width = width
        self.height = height
        self.margin = margin
        self.sx = (width - 2 * margin) / (window["x_max"] - window["x_min"])
        self.sy = (height - 2 * margin) / (window["y_max"] - window["y_min"])

    def px(self, x):
        return self.margin + (x - self.w["x_min"]) * self.sx

    def py(self, y):
        return self.height - self.margin - (y - self.w["y_min"]) * self.sy


def _polyline_points(mapper, xs, ys):
    # split at wrap jumps so rotational traces do not smear across the page
    parts = []
    cur = []
    prev = None
    for x, y in zip(xs, ys):
        if prev is not None and abs(x - prev) > math.pi:
            if len(cur) > 1:
                parts.append(cur)
            cur = []
        cur.append(f"{mapper.px(x):.2f},{mapper.py(y):.2f}")
        prev = x
    if len(cur) > 1:
        parts.append(cur)
    return parts


def write_svg(path, window: dict, traces, equilibria_rows, title: str = "") -> None:
    """Render traces and equilibria to a standalone SVG 1.1 document.

    traces: iterable of (source, xs, ys).  equilibria_rows: iterables with
    keys x, y, stability.  Elliptic points draw as filled circles,
    hyperbolic as saltires, degenerate as open squares; dashed symmetry
    lines sit at x = 0 and x = pi.
    """
    m = _SvgMapper(window)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{m.width}" height="{m.height}" '
        f'viewBox="0 0 {m.width} {m.height}">',
        f'<rect width="{m.width}" height="{m.height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{m.width / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for x_line in (0.0, math.pi):
        if window["x_min"] <= x_line <= window["x_max"]:
            px = m.px(x_line)
            parts.append(
                f'<line x1="{px:.2f}" y1="{m.margin}" x2="{px:.2f}" '
                f'y2="{m.height - m.margin}" stroke="#999999" '
                f'stroke-dasharray="6,4" stroke-width="1"/>'
            )
    for source, xs, ys in traces:
        color = _SOURCE_COLORS.get(source, "#000000")
        width = "1.2" if source == "separatrix" else "0.8"
        for segment in _polyline_points(m, xs, ys):
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
                f'points="{" ".join(segment)}"/>'
            )
    for row in equilibria_rows:
        px, py = m.px(row["x"]), m.py(row["y"])
        if row["stability"] == "elliptic":
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="#111111"/>')
        elif row["stability"] == "hyperbolic":
            parts.append(
                f'<path d="M {px - 4:.2f} {py - 4:.2f} L {px + 4:.2f} {py + 4:.2f} '
                f'M {px - 4:.2f} {py + 4:.2f} L {px + 4:.2f} {py - 4:.2f}" '
                f'stroke="#111111" stroke-width="1.6" fill="none"/>'
            )
        else:
            parts.append(
                f'<rect x="{px - 4:.2f}" y="{py - 4:.2f}" width="8" height="8" '
                f'stroke="#111111" fill="none" stroke-width="1.4"/>'
            )
        parts.append(
            f'<text x="{px + 6:.2f}" y="{py - 6:.2f}" font-family="sans-serif" '
            f'font-size="10">{row["label"]}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")

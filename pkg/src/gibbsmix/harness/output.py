"""CSV and SVG writers."""

from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
_MARGIN = 50


def fmt(v) -> str:
    """Decimal with 17 significant digits (round-trips a double)."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def _scaler(lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return lambda v: out_lo + (np.asarray(v, dtype=float) - lo) / span * (out_hi - out_lo)


def render_svg(curves, crosses=None, title: str = "") -> str:
    """Polyline plot in a fixed 800x500 viewBox.

    curves: list of (label, x, y, colour); crosses: (x, y) drawn as small x marks.
    """
    xs = [np.asarray(c[1]) for c in curves] + ([np.asarray(crosses[0])] if crosses else [])
    ys = [np.asarray(c[2]) for c in curves] + ([np.asarray(crosses[1])] if crosses else [])
    xall, yall = np.concatenate(xs), np.concatenate(ys)
    sx = _scaler(xall.min(), xall.max(), _MARGIN, WIDTH - _MARGIN)
    sy = _scaler(yall.min(), yall.max(), HEIGHT - _MARGIN, _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{HEIGHT - _MARGIN}" x2="{WIDTH - _MARGIN}" y2="{HEIGHT - _MARGIN}" stroke="#888"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" y2="{HEIGHT - _MARGIN}" stroke="#888"/>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="30" text-anchor="middle" font-size="16">{escape(title)}</text>')
    for i, (label, x, y, colour) in enumerate(curves):
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx(x), sy(y)))
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{pts}"/>')
        parts.append(
            f'<text x="{WIDTH - _MARGIN - 150}" y="{_MARGIN + 18 * i}" font-size="12" fill="{colour}">{escape(label)}</text>'
        )
    if crosses:
        for a, b in zip(sx(crosses[0]), sy(crosses[1])):
            parts.append(
                f'<path d="M{a - 3:.2f},{b - 3:.2f} L{a + 3:.2f},{b + 3:.2f} M{a - 3:.2f},{b + 3:.2f} L{a + 3:.2f},{b - 3:.2f}" stroke="#555"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path, svg: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    return path

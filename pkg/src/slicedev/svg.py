"""Minimal SVG figures: original chain dashed, reconfigured chain solid,
forbidden disk as a circle about the shoulder."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

SIZE = 512
PAD = 24


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def render(original: np.ndarray | None, reconfigured: np.ndarray,
           disk_radius: float | None = None, center=(0.0, 0.0), title: str = "") -> str:
    """SVG text for chains given as (k, 2) joint arrays."""
    pts = [np.asarray(reconfigured, dtype=float)]
    if original is not None:
        pts.append(np.asarray(original, dtype=float))
    allp = np.vstack(pts)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    if disk_radius:
        c = np.asarray(center, dtype=float)
        lo = np.minimum(lo, c - disk_radius)
        hi = np.maximum(hi, c + disk_radius)
    span = float(max(hi - lo)) or 1.0
    scale = (SIZE - 2 * PAD) / span
    mid = (lo + hi) / 2

    def xy(p):
        x = SIZE / 2 + (p[0] - mid[0]) * scale
        y = SIZE / 2 - (p[1] - mid[1]) * scale
        return f"{_fmt(x)},{_fmt(y)}"

    def poly(a: Sequence, style: str) -> str:
        return f'<polyline points="{" ".join(xy(p) for p in a)}" fill="none" {style}/>'

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>')
    if disk_radius is not None:
        cx, cy = xy(center).split(",")
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(disk_radius * scale)}" '
                   'fill="#dddddd" fill-opacity="0.5" stroke="gray" stroke-width="1"/>')
    if original is not None:
        out.append(poly(original, 'stroke="black" stroke-width="1.5" stroke-dasharray="6,4"'))
    out.append(poly(reconfigured, 'stroke="black" stroke-width="2"'))
    for p in reconfigured:
        cx, cy = xy(p).split(",")
        out.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

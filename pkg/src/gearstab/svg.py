"""Standalone SVG rendering of stability loci (no plotting dependencies).

Output is plain deterministic text: identical inputs give byte-identical SVG.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class PlotSpec:
    """Figure geometry for a stability-region plot in the h*lambda plane."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    width_px: int = 640
    height_px: int = 640
    shade_exterior: bool = True
    dashed_vertical_at: Optional[float] = None

    def __post_init__(self):
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise ValueError("plot ranges must be non-degenerate")
        if self.width_px < 100 or self.height_px < 100:
            raise ValueError("pixel dimensions must be at least 100")


def default_plot_spec(sigmas, *, dashed_vertical_at=None) -> PlotSpec:
    """Ranges padded 15% around the locus (origin always included)."""
    re = np.concatenate([np.real(sigmas), [0.0]])
    im = np.concatenate([np.imag(sigmas), [0.0]])
    if dashed_vertical_at is not None:
        re = np.concatenate([re, [dashed_vertical_at]])
    pad_x = 0.15 * max(re.max() - re.min(), 1e-3)
    pad_y = 0.15 * max(im.max() - im.min(), 1e-3)
    return PlotSpec(x_range=(float(re.min() - pad_x), float(re.max() + pad_x)),
                    y_range=(float(im.min() - pad_y), float(im.max() + pad_y)),
                    dashed_vertical_at=dashed_vertical_at)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_spacing(span: float) -> float:
    raw = span / 8.0
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def locus_svg(sigmas, spec: PlotSpec, *, title: str = "") -> str:
    """Render a closed locus polyline with axes, ticks, optional exterior
    shading (even-odd fill against the viewport) and dashed abscissa line."""
    w, h = spec.width_px, spec.height_px
    x0, x1 = spec.x_range
    y0, y1 = spec.y_range

    def px(x):
        return (x - x0) / (x1 - x0) * w

    def py(y):
        return h - (y - y0) / (y1 - y0) * h

    pts = [(px(s.real), py(s.imag)) for s in np.asarray(sigmas)]
    locus_path = "M " + " L ".join(f"{_fmt(a)} {_fmt(b)}" for a, b in pts) + " Z"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    if spec.shade_exterior:
        shade = f"M 0 0 L {w} 0 L {w} {h} L 0 {h} Z " + locus_path
        parts.append(f'<path d="{shade}" fill="#c8c8c8" fill-rule="evenodd" stroke="none"/>')

    # Axes with ticks.
    axis = '<g stroke="black" stroke-width="1">'
    tick_labels = []
    if x0 < 0.0 < x1:
        xa = px(0.0)
        axis += f'<line x1="{_fmt(xa)}" y1="0" x2="{_fmt(xa)}" y2="{h}"/>'
    if y0 < 0.0 < y1:
        ya = py(0.0)
        axis += f'<line x1="0" y1="{_fmt(ya)}" x2="{w}" y2="{_fmt(ya)}"/>'
        dx = _tick_spacing(x1 - x0)
        t = np.ceil(x0 / dx) * dx
        while t <= x1:
            if abs(t) > 1e-12:
                xt = px(t)
                axis += f'<line x1="{_fmt(xt)}" y1="{_fmt(ya - 4)}" x2="{_fmt(xt)}" y2="{_fmt(ya + 4)}"/>'
                tick_labels.append(
                    f'<text x="{_fmt(xt)}" y="{_fmt(ya + 16)}" font-size="10" '
                    f'text-anchor="middle">{t:.6g}</text>')
            t += dx
    if x0 < 0.0 < x1 and y0 < 0.0 < y1:
        xa = px(0.0)
        dy = _tick_spacing(y1 - y0)
        t = np.ceil(y0 / dy) * dy
        while t <= y1:
            if abs(t) > 1e-12:
                yt = py(t)
                axis += f'<line x1="{_fmt(xa - 4)}" y1="{_fmt(yt)}" x2="{_fmt(xa + 4)}" y2="{_fmt(yt)}"/>'
                tick_labels.append(
                    f'<text x="{_fmt(xa + 6)}" y="{_fmt(yt + 3)}" font-size="10">{t:.6g}</text>')
            t += dy
    axis += "</g>"
    parts.append(axis)
    parts.extend(tick_labels)

    if spec.dashed_vertical_at is not None and x0 < spec.dashed_vertical_at < x1:
        xd = px(spec.dashed_vertical_at)
        parts.append(f'<line x1="{_fmt(xd)}" y1="0" x2="{_fmt(xd)}" y2="{h}" '
                     f'stroke="black" stroke-width="1" stroke-dasharray="6 4"/>')

    parts.append(f'<path d="{locus_path}" fill="none" stroke="#1040a0" stroke-width="1.5"/>')
    if title:
        parts.append(f'<text x="10" y="18" font-size="13">{title}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

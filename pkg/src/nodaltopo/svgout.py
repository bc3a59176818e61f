"""Deterministic SVG rendering of extracted nodal sets.

Sphere pictures use the equirectangular projection (poles are the top and
bottom edges, which are single points on the sphere); disc pictures are
drawn in plane coordinates.  Domain signs appear as translucent tints,
nodal curves as solid paths, and crossing-point sign markers follow the
filled-positive / hollow-negative convention.
"""

from __future__ import annotations

import math

import numpy as np

from . import nodal

_POS_TINT = "#d05050"
_NEG_TINT = "#5070d0"


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _polyline(points: list[tuple[float, float]], color: str, width: float, dashed: bool = False) -> str:
    attrs = f'fill="none" stroke="{color}" stroke-width="{width}"'
    if dashed:
        attrs += ' stroke-dasharray="6 4"'
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return f'<polyline {attrs} points="{pts}"/>'


def _split_on_wrap(pts: np.ndarray, width: float) -> list[np.ndarray]:
    """Split a polyline where it jumps across the longitude seam."""
    out = []
    start = 0
    for i in range(1, len(pts)):
        if abs(pts[i, 0] - pts[i - 1, 0]) > width / 2.0:
            out.append(pts[start:i])
            start = i
    out.append(pts[start:])
    return [p for p in out if len(p) >= 2]


def _tint_rects(values: np.ndarray, to_xy, cell_w: float, cell_h: float, max_cells: int = 128) -> list[str]:
    step = max(1, values.shape[0] // max_cells, values.shape[1] // max_cells)
    sub = values[::step, ::step]
    rows = []
    for i in range(sub.shape[0]):
        for j in range(sub.shape[1]):
            v = sub[i, j]
            if v == 0.0:
                continue
            x, y = to_xy(i * step, j * step)
            color = _POS_TINT if v > 0 else _NEG_TINT
            rows.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cell_w * step)}"'
                f' height="{_fmt(cell_h * step)}" fill="{color}" fill-opacity="0.12"/>'
            )
    return rows


def sphere_svg(topology: nodal.NodalTopology, crossings=None) -> str:
    """Equirectangular map of a sphere extraction, with optional sign markers.

    `crossings` is an iterable of (theta, phi, value) for the perturbing
    harmonic at the base nodal crossings (filled marker = positive).
    """
    grid = topology.grid
    w, h = 800.0, 400.0

    def theta_phi_to_xy(theta: float, phi: float) -> tuple[float, float]:
        return (phi / (2.0 * math.pi)) * w, (theta / math.pi) * h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(w)}" height="{int(h + 24)}" '
        f'viewBox="0 0 {int(w)} {int(h + 24)}">',
        f'<rect x="0" y="0" width="{int(w)}" height="{int(h)}" fill="white" stroke="black"/>',
    ]
    ntheta, nphi = grid.values.shape
    cell_w = w / nphi
    cell_h = h / (ntheta - 1)

    def cell_xy(i: int, j: int) -> tuple[float, float]:
        return j * cell_w, (i - 0.5) * cell_h

    parts.extend(_tint_rects(grid.values, cell_xy, cell_w, cell_h))
    for curve in topology.curves:
        pts = nodal.curve_points(grid, curve)
        xy = np.array([theta_phi_to_xy(t, p % (2.0 * math.pi)) for t, p in pts])
        if curve.closed and len(xy):
            xy = np.vstack([xy, xy[:1]])
        for piece in _split_on_wrap(xy, w):
            parts.append(_polyline([tuple(p) for p in piece], "black", 1.4))
    if crossings:
        for theta, phi, value in crossings:
            x, y = theta_phi_to_xy(theta, phi % (2.0 * math.pi))
            if value > 0:
                parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="black"/>')
            else:
                parts.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="white" stroke="black"/>'
                )
    parts.append(
        f'<text x="4" y="{int(h + 16)}" font-size="12">'
        "equirectangular map: all points of the top line (north pole) are one point, "
        "likewise the bottom line (south pole)</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts)


def disc_svg(topology: nodal.NodalTopology, dashed_reference=None, markers=None) -> str:
    """Disc extraction picture: solid traced curves, optional dashed reference.

    `dashed_reference` is a list of polylines in plane coordinates (for the
    unperturbed nodal set); `markers` a list of (x, y, value) sign markers.
    """
    grid = topology.grid
    r = grid.radius
    size = 640.0
    scale = size / (2.0 * r)

    def to_xy(x: float, y: float) -> tuple[float, float]:
        return (x + r) * scale, (r - y) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(size)}" height="{int(size)}" '
        f'viewBox="0 0 {int(size)} {int(size)}">',
        f'<rect x="0" y="0" width="{int(size)}" height="{int(size)}" fill="white"/>',
        f'<circle cx="{_fmt(size / 2)}" cy="{_fmt(size / 2)}" r="{_fmt(r * scale)}" '
        'fill="none" stroke="black" stroke-width="0.8"/>',
    ]
    cell = (grid.xs[1] - grid.xs[0]) * scale

    def cell_xy(i: int, j: int) -> tuple[float, float]:
        return to_xy(grid.xs[i], grid.ys[j])[0], to_xy(grid.xs[i], grid.ys[j])[1] - cell

    parts.extend(_tint_rects(grid.values, cell_xy, cell, cell))
    if dashed_reference:
        for line in dashed_reference:
            parts.append(_polyline([to_xy(x, y) for x, y in line], "#404040", 1.0, dashed=True))
    for curve in topology.curves:
        pts = nodal.curve_points(grid, curve)
        xy = [to_xy(x, y) for x, y in pts]
        if curve.closed and xy:
            xy.append(xy[0])
        parts.append(_polyline(xy, "black", 1.4))
    if markers:
        for x, y, value in markers:
            cx, cy = to_xy(x, y)
            if value > 0:
                parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="black"/>')
            else:
                parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="white" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def circle_polyline(radius: float, segments: int = 256) -> list[tuple[float, float]]:
    ang = np.linspace(0.0, 2.0 * math.pi, segments + 1)
    return [(radius * math.cos(a), radius * math.sin(a)) for a in ang]

"""Write-only SVG rendering of 2-D currents, molecules and lifted currents
(projected to the first two coordinates with height mapped to color)."""

from __future__ import annotations

import math

from .currents import Molecule, PolyhedralCurrent

_POS = "#2166ac"
_NEG = "#b2182b"


def _viewport(points, pad=0.08):
    xs = [p[0] for p in points] or [0.0, 1.0]
    ys = [p[1] for p in points] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    w = max(x1 - x0, 1e-9)
    h = max(y1 - y0, 1e-9)
    x0 -= pad * w
    y0 -= pad * h
    w *= 1 + 2 * pad
    h *= 1 + 2 * pad
    return x0, y0, w, h


def _height_color(z: float, zmin: float, zmax: float) -> str:
    if zmax - zmin < 1e-15:
        t = 0.0
    else:
        t = (z - zmin) / (zmax - zmin)
    r = int(40 + 215 * t)
    g = int(60 + 80 * (1 - abs(2 * t - 1)))
    b = int(200 - 170 * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_current(T: PolyhedralCurrent, path: str) -> None:
    dim = T.space.dim
    pts2 = [(p.a[0], p.a[1] if dim > 1 else 0.0) for p in T.pieces]
    pts2 += [(p.b[0], p.b[1] if dim > 1 else 0.0) for p in T.pieces]
    x0, y0, w, h = _viewport(pts2)
    lines = []
    if dim >= 3:  # lifted: height as color
        zs = [p.a[-1] for p in T.pieces] + [p.b[-1] for p in T.pieces]
        zmin, zmax = min(zs), max(zs)
        for p in T.pieces:
            color = _height_color(0.5 * (p.a[-1] + p.b[-1]), zmin, zmax)
            lines.append(_line(p.a, p.b, color, abs(p.w), h))
    else:
        for p in T.pieces:
            a = (p.a[0], p.a[1] if dim > 1 else 0.0)
            b = (p.b[0], p.b[1] if dim > 1 else 0.0)
            lines.append(_line(a, b, _POS if p.w >= 0 else _NEG, abs(p.w), h))
    _write(path, x0, y0, w, h, lines)


def render_molecule(m: Molecule, path: str) -> None:
    pts = [(p[0], p[1] if len(p) > 1 else 0.0) for p, _ in m.atoms]
    x0, y0, w, h = _viewport(pts)
    shapes = []
    for (p, wgt), q in zip(m.atoms, pts):
        r = 0.012 * max(w, h) * math.sqrt(abs(wgt))
        color = _POS if wgt >= 0 else _NEG
        shapes.append(
            f'<circle cx="{q[0]:.6g}" cy="{q[1]:.6g}" r="{r:.6g}" fill="{color}"/>'
        )
    _write(path, x0, y0, w, h, shapes)


def _line(a, b, color, weight, h) -> str:
    sw = 0.004 * h * min(3.0, max(0.3, weight))
    return (
        f'<line x1="{a[0]:.6g}" y1="{a[1]:.6g}" x2="{b[0]:.6g}" y2="{b[1]:.6g}" '
        f'stroke="{color}" stroke-width="{sw:.6g}" stroke-linecap="round"/>'
    )


def _write(path, x0, y0, w, h, elements) -> None:
    # flip y so the mathematical orientation points up
    body = "\n".join(elements)
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.6g} {y0:.6g} {w:.6g} {h:.6g}" width="640" height="640">\n'
        f'<g transform="translate(0,{(2 * y0 + h):.6g}) scale(1,-1)">\n'
        f"{body}\n</g>\n</svg>\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)

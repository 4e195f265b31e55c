"""SVG and DOT output.

Numbers are printed with 9 significant digits so repeated runs produce
byte-identical files.  Tilings are drawn in the Poincaré disk, with edges
and cell sides as geodesic arcs.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .graph import Window
from .hyperbolic import HTiling, from_klein

SIZE = 1000.0
SCALE = 480.0


def fmt(x: float) -> str:
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def _xy(z: complex) -> tuple:
    return SIZE / 2 + SCALE * z.real, SIZE / 2 - SCALE * z.imag


def geodesic_path(a: complex, b: complex, move: bool = True) -> str:
    """SVG path fragment for the Poincaré geodesic from ``a`` to ``b``."""
    ax, ay = _xy(a)
    bx, by = _xy(b)
    head = f"M {fmt(ax)} {fmt(ay)} " if move else ""
    cross = a.real * b.imag - a.imag * b.real
    if abs(cross) < 1e-12 or abs(a - b) < 1e-12:
        return head + f"L {fmt(bx)} {fmt(by)}"
    # centre c of the circle through a, b orthogonal to the unit circle:
    # 2 Re(conj(c) p) = |p|^2 + 1 for p in {a, b}
    m = np.array([[a.real, a.imag], [b.real, b.imag]])
    rhs = np.array([(abs(a) ** 2 + 1) / 2, (abs(b) ** 2 + 1) / 2])
    cx, cy = np.linalg.solve(m, rhs)
    r = math.sqrt(max(cx * cx + cy * cy - 1, 0.0)) * SCALE
    # the arc bends toward the centre of the disk; with y flipped a positive
    # cross product is a clockwise sweep on screen
    sweep = 0 if cross > 0 else 1
    return head + f"A {fmt(r)} {fmt(r)} 0 0 {sweep} {fmt(bx)} {fmt(by)}"


def _svg(body: Iterable[str]) -> str:
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(SIZE)}" height="{fmt(SIZE)}" '
             f'viewBox="0 0 {fmt(SIZE)} {fmt(SIZE)}">']
    lines.extend(body)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _disk() -> str:
    c = fmt(SIZE / 2)
    return f'<circle cx="{c}" cy="{c}" r="{fmt(SCALE)}" fill="none" stroke="#888"/>'


def window_svg(w: Window, highlight: Iterable[int] = (), klein: bool = True) -> str:
    """Draw a window from its ``pos``.

    With ``klein`` the positions are read as Klein coordinates and edges are
    drawn as Poincaré geodesics; otherwise positions are rescaled into the
    canvas and edges are straight.
    """
    if w.pos is None:
        raise ValueError("window has no positions")
    hi = set(highlight)
    if klein:
        pts = [complex(from_klein(complex(x, y))) for x, y in w.pos]
        body = [_disk()]
    else:
        arr = np.asarray(w.pos, dtype=float)
        lo, top = arr.min(axis=0), arr.max(axis=0)
        span = float(max((top - lo).max(), 1e-12))
        pts = [complex(*(2 * (p - lo) / span - 1) * 0.95) for p in arr]
        body = []
    for e in sorted(w.edges):
        u, v = w.edges[e]
        colour, width = ("#c0392b", 2) if e in hi else ("#555", 1)
        if klein:
            d = geodesic_path(pts[u], pts[v])
        else:
            (ax, ay), (bx, by) = _xy(pts[u]), _xy(pts[v])
            d = f"M {fmt(ax)} {fmt(ay)} L {fmt(bx)} {fmt(by)}"
        body.append(f'<path d="{d}" fill="none" stroke="{colour}" stroke-width="{width}"/>')
    for v, z in enumerate(pts):
        x, y = _xy(z)
        fill = "#2c7fb8" if w.boundary[v] else "#222"
        body.append(f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="2" fill="{fill}"/>')
    return _svg(body)


def tiling_svg(t: HTiling, tree: Window | None = None, interior: list | None = None) -> str:
    """Dirichlet cells, sites, and optionally a treeing drawn between sites.

    ``interior`` maps the tree's vertex ids back to site ids (as returned by
    ``tiling_treeing``).
    """
    body = [_disk()]
    for i, cell in enumerate(t.cells):
        pts = [complex(from_klein(complex(x, y))) for x, y in cell]
        parts = [geodesic_path(pts[0], pts[1])]
        for j in range(1, len(pts)):
            parts.append(geodesic_path(pts[j], pts[(j + 1) % len(pts)], move=False))
        fill = "#eef" if t.dual.boundary[i] else "#fff"
        body.append(f'<path d="{" ".join(parts)} Z" fill="{fill}" stroke="#999" stroke-width="0.5"/>')
    sites = [complex(z) for z in t.sites]
    if tree is not None:
        ids = interior if interior is not None else list(range(tree.n))
        for e in sorted(tree.edges):
            u, v = tree.edges[e]
            d = geodesic_path(sites[ids[u]], sites[ids[v]])
            body.append(f'<path d="{d}" fill="none" stroke="#c0392b" stroke-width="1.2"/>')
    for z in sites:
        x, y = _xy(z)
        body.append(f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="1.5" fill="#222"/>')
    return _svg(body)


def forest_dot(w: Window, parent: dict, name: str = "forest") -> str:
    """DOT digraph of a parent map, vertices in id order."""
    return w.to_dot(name, directed_parent=parent)

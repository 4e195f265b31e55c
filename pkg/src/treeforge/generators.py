"""Built-in window generators.

Planar generators attach positions and a counter-clockwise rotation system
so face tracing works out of the box.
"""

from __future__ import annotations

import math

import numpy as np

from .graph import Window


def rotation_from_pos(n: int, edges: dict, pos) -> list:
    """CCW rotation system for a straight-line drawing."""
    inc = [[] for _ in range(n)]
    for e, (u, v) in edges.items():
        inc[u].append(e)
        inc[v].append(e)
    rot = []
    for x in range(n):
        def angle(e, x=x):
            u, v = edges[e]
            y = v if u == x else u
            return math.atan2(pos[y][1] - pos[x][1], pos[y][0] - pos[x][0]), e
        rot.append(sorted(inc[x], key=angle))
    return rot


def embedded(n: int, edges, boundary, pos) -> Window:
    emap = dict(enumerate(edges)) if not isinstance(edges, dict) else edges
    return Window(n, emap, boundary, pos, rotation_from_pos(n, emap, pos))


def path(m: int, boundary_ends: bool = True) -> Window:
    edges = [(i, i + 1) for i in range(m - 1)]
    b = [0, m - 1] if boundary_ends and m > 0 else []
    pos = [(float(i), 0.0) for i in range(m)]
    return embedded(m, edges, b, pos)


def cycle(m: int, boundary=()) -> Window:
    edges = [(i, (i + 1) % m) for i in range(m)]
    pos = [(math.cos(2 * math.pi * i / m), math.sin(2 * math.pi * i / m)) for i in range(m)]
    return embedded(m, edges, boundary, pos)


def complete(m: int, boundary=()) -> Window:
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    return Window(m, edges, boundary)


def planar_k4() -> Window:
    pos = [(0.0, 0.0), (1.0, 0.0), (-0.5, 0.866), (-0.5, -0.866)]
    # center 0, outer triangle 1-2-3
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]
    return embedded(4, edges, [], pos)


def cube() -> Window:
    outer = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)]
    inner = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    edges = [(i, (i + 1) % 4) for i in range(4)]
    edges += [(4 + i, 4 + (i + 1) % 4) for i in range(4)]
    edges += [(i, i + 4) for i in range(4)]
    return embedded(8, edges, [], outer + inner)


def grid(rows: int, cols: int | None = None, rim_boundary: bool = True) -> Window:
    """``rows x cols`` grid; vertex ``(r, c)`` has id ``r*cols + c``."""
    cols = rows if cols is None else cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    b = []
    if rim_boundary:
        b = [r * cols + c for r in range(rows) for c in range(cols)
             if r in (0, rows - 1) or c in (0, cols - 1)]
    pos = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    return embedded(rows * cols, edges, b, pos)


def grid3(n: int, rim_boundary: bool = True) -> Window:
    """``n x n x n`` cubic grid; vertex ``(x, y, z)`` has id ``(x*n + y)*n + z``."""
    def vid(x, y, z):
        return (x * n + y) * n + z
    edges, b = [], []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                v = vid(x, y, z)
                if x + 1 < n:
                    edges.append((v, vid(x + 1, y, z)))
                if y + 1 < n:
                    edges.append((v, vid(x, y + 1, z)))
                if z + 1 < n:
                    edges.append((v, vid(x, y, z + 1)))
                if rim_boundary and {0, n - 1} & {x, y, z}:
                    b.append(v)
    return Window(n ** 3, edges, b)


def torus(rows: int, cols: int | None = None) -> Window:
    """Periodic grid (no boundary, not embedded)."""
    cols = rows if cols is None else cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            edges.append((v, r * cols + (c + 1) % cols))
            edges.append((v, ((r + 1) % rows) * cols + c))
    return Window(rows * cols, edges, [])


def tree_ball(d: int, radius: int) -> Window:
    """Ball of radius ``radius`` in the ``d``-regular tree; leaves are boundary."""
    edges = []
    depth = [0]
    frontier = [0]
    n = 1
    for r in range(radius):
        nxt = []
        for x in frontier:
            kids = d if r == 0 else d - 1
            for _ in range(kids):
                edges.append((x, n))
                depth.append(r + 1)
                nxt.append(n)
                n += 1
        frontier = nxt
    b = [v for v in range(n) if depth[v] == radius] if radius > 0 else []
    return Window(n, edges, b)


def star(k: int, boundary_center: bool = False) -> Window:
    return Window(k + 1, [(0, i) for i in range(1, k + 1)], [0] if boundary_center else [])


def ladder(m: int) -> Window:
    """Half-infinite ladder ``P_m x P_2``: rails ``0..m-1`` and ``m..2m-1``.

    The far end (column ``m-1``) is the boundary, the near end is closed.
    """
    edges = [(i, i + 1) for i in range(m - 1)]
    edges += [(m + i, m + i + 1) for i in range(m - 1)]
    edges += [(i, m + i) for i in range(m)]
    pos = [(float(i), 0.0) for i in range(m)] + [(float(i), 1.0) for i in range(m)]
    return embedded(2 * m, edges, [m - 1, 2 * m - 1], pos)


def random_regular(d: int, n: int, seed: int) -> Window:
    """Uniform random simple ``d``-regular graph (networkx pairing model)."""
    import networkx as nx

    g = nx.random_regular_graph(d, n, seed=int(seed) % (2**32))
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    return Window(n, edges, [])


def random_planar(n: int, seed: int, keep: float = 0.7, connected: bool = True,
                  two_connected: bool = False, max_tries: int = 1000) -> Window:
    """Random straight-line planar graph from a Delaunay triangulation.

    Edges of the triangulation are kept independently with probability
    ``keep``; draws are repeated until the connectivity request holds.
    """
    from scipy.spatial import Delaunay

    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pts = rng.random((n, 2))
        if n >= 3:
            tri = Delaunay(pts)
            es = set()
            for s in tri.simplices:
                for i in range(3):
                    a, b = int(s[i]), int(s[(i + 1) % 3])
                    es.add((min(a, b), max(a, b)))
            es = sorted(es)
        else:
            es = [(0, 1)] if n == 2 else []
        mask = rng.random(len(es)) < keep
        chosen = [e for e, k in zip(es, mask) if k]
        w = embedded(n, chosen, [], [tuple(p) for p in pts])
        from .graph import components
        if connected and len(components(w)) != 1:
            continue
        if two_connected:
            from .planar import blocks
            if n < 3 or len(blocks(w)) != 1 or any(w.degree(v) < 2 for v in range(n)):
                continue
        return w
    raise RuntimeError("could not draw a planar graph with the requested connectivity")

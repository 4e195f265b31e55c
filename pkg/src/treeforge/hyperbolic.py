"""Hyperbolic plane: distances, site sampling, Dirichlet tessellations, tilings.

Points are complex numbers in the Poincaré disk.  Cell computations run in
the Klein model, where bisectors are straight chords: with hyperboloid
coordinates ``s = (s0, s1, s2)`` of a site, ``cosh d(site, k)`` is
proportional to ``s0 - s1 k1 - s2 k2`` at Klein point ``k``, so every cell
is an intersection of Euclidean half-planes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BadParams, DegenerateSites, NotHyperbolic
from .graph import Window, components, is_forest
from .planar import TwoBasis, treeing_from_basis, validate_two_basis

TOL = 1e-10


# coordinates --------------------------------------------------------------


def hdist(a, b):
    """Hyperbolic distance between Poincaré-disk points (arrays broadcast)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    num = np.abs(a - b)
    den = np.abs(1 - np.conj(a) * b)
    r = 2 * np.arctanh(np.minimum(num / den, 1.0))
    return float(r) if r.ndim == 0 else r


def to_klein(z):
    z = np.asarray(z, dtype=complex)
    return 2 * z / (1 + np.abs(z) ** 2)


def from_klein(k):
    k = np.asarray(k, dtype=complex)
    return k / (1 + np.sqrt(np.maximum(1 - np.abs(k) ** 2, 0.0)))


def to_hyperboloid(z):
    """``(x0, x1, x2)`` rows for Poincaré points ``z``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r2 = np.abs(z) ** 2
    d = 1 - r2
    return np.stack([(1 + r2) / d, 2 * z.real / d, 2 * z.imag / d], axis=1)


def klein_to_hyperboloid(k):
    k = np.atleast_2d(np.asarray(k, dtype=float))
    s = 1 / np.sqrt(1 - (k ** 2).sum(axis=1))
    return np.stack([s, k[:, 0] * s, k[:, 1] * s], axis=1)


def disk_radius(rho: float) -> float:
    """Poincaré radius of the circle at hyperbolic distance ``rho`` from 0."""
    return math.tanh(rho / 2)


def disk_area(R: float) -> float:
    return 2 * math.pi * (math.cosh(R) - 1)


def triangle_area(u, v, w) -> float:
    """Area of a hyperbolic triangle from hyperboloid vertices."""
    def mink(a, b):
        return a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
    det = abs(np.linalg.det(np.array([u, v, w])))
    den = 1 + mink(u, v) + mink(v, w) + mink(w, u)
    return 2 * math.atan2(det, den)


def polygon_area_klein(poly, center=None) -> float:
    """Area of a convex Klein-model polygon by a triangle fan."""
    poly = np.asarray(poly, dtype=float)
    if len(poly) < 3:
        return 0.0
    c = poly.mean(axis=0) if center is None else np.asarray(center, dtype=float)
    hc = klein_to_hyperboloid(c)[0]
    hp = klein_to_hyperboloid(poly)
    tot = 0.0
    for i in range(len(poly)):
        tot += triangle_area(hc, hp[i], hp[(i + 1) % len(poly)])
    return tot


def polygon_angle_defect(poly_disk) -> float:
    """Area of a geodesic polygon (Poincaré vertices) as ``(n-2)π - Σ angles``.

    Interior angles are measured between the tangent directions of the
    geodesic sides, which the conformal Poincaré model shows faithfully.
    """
    pts = [complex(z) for z in poly_disk]
    n = len(pts)

    def tangent(a, b):
        # move a to the origin; the geodesic becomes a ray
        m = (b - a) / (1 - np.conj(a) * b)
        # derivative of the inverse map at 0 is (1 - |a|^2), a positive real
        return m / abs(m)

    tot = 0.0
    for i in range(n):
        a, p, q = pts[i], pts[i - 1], pts[(i + 1) % n]
        t1, t2 = tangent(a, p), tangent(a, q)
        ang = abs(math.atan2((t1.conjugate() * t2).imag, (t1.conjugate() * t2).real))
        tot += ang
    return (n - 2) * math.pi - tot


# Möbius maps ----------------------------------------------------------------


def mobius(m, z):
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return (a * z + b) / (c * z + d)


def normalize(m):
    det = np.linalg.det(m)
    return m / np.sqrt(det)


def rotation(theta: float):
    e = np.exp(0.5j * theta)
    return np.array([[e, 0], [0, np.conj(e)]], dtype=complex)


def translation(length: float, theta: float = 0.0):
    """Hyperbolic translation by ``length`` along the diameter at angle ``theta``."""
    ch, sh = math.cosh(length / 2), math.sinh(length / 2)
    t = np.array([[ch, sh], [sh, ch]], dtype=complex)
    return rotation(theta) @ t @ rotation(-theta)


def genus2_generators():
    """Side pairings of the regular {8,8} octagon group.

    Eight translations (four generators and their inverses) along the
    diameters at angles ``kπ/4``, each by twice the octagon's inradius.
    """
    inr = math.acosh(1 / math.tan(math.pi / 8))
    return [normalize(translation(2 * inr, k * math.pi / 4)) for k in range(8)]


# site sampling -----------------------------------------------------------------


def window_sides(R: float) -> int:
    """Side count keeping the inscribed Klein polygon within ~1% of ``R`` in depth."""
    gap = 1 - math.tanh(R)
    n = math.ceil(math.pi / math.sqrt(2 * 0.05 * gap)) if gap > 0 else 4096
    return int(min(max(64, n), 1 << 16))


def window_polygon(R: float, sides: int | None = None) -> np.ndarray:
    """Regular Klein-model polygon inscribed in the circle of radius ``R``."""
    sides = window_sides(R) if sides is None else sides
    rk = math.tanh(R)
    ang = 2 * math.pi * np.arange(sides) / sides
    return np.stack([rk * np.cos(ang), rk * np.sin(ang)], axis=1)


def _inside_convex(poly, pts, margin=0.0):
    """Points strictly inside a CCW convex polygon (by at least ``margin``)."""
    pts = np.atleast_2d(pts)
    ok = np.ones(len(pts), dtype=bool)
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        cross = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        ok &= cross > margin * np.hypot(*(b - a))
    return ok


def _hard_core(points: np.ndarray, r0: float) -> list:
    hyp = to_hyperboloid(points)
    kept = []
    ch = math.cosh(r0)
    for i in range(len(points)):
        if kept:
            k = hyp[kept]
            c = k[:, 0] * hyp[i, 0] - k[:, 1] * hyp[i, 1] - k[:, 2] * hyp[i, 2]
            if np.any(c <= ch):
                continue
        kept.append(i)
    return kept


def sample_sites(R: float, mode: str = "poisson", r0: float = 0.5, lam: float = 1.0, seed: int = 0,
                 wordlen: int = 2, pq=(8, 3), sides: int | None = None) -> np.ndarray:
    """Sites in the hyperbolic disk of radius ``R``.

    Modes:
        ``poisson``: intensity ``lam`` per unit hyperbolic area, thinned in
            arrival order so that all pairwise distances exceed ``r0``.
        ``genus2``: orbit of 0 under words of length at most ``wordlen`` in
            the genus-2 octagon group.
        ``pq``: centres of the tiles of the ``{p, q}`` tiling.

    Only sites strictly inside the Klein window polygon are returned.

    Raises:
        BadParams: ``R <= r0``, ``r0 <= 0`` or a negative intensity.
    """
    if not (R > r0 > 0) or lam < 0:
        raise BadParams(f"need R > r0 > 0 and lam >= 0 (got R={R}, r0={r0}, lam={lam})")
    if mode == "poisson":
        rng = np.random.default_rng(seed)
        cnt = int(rng.poisson(lam * disk_area(R)))
        u = rng.random(cnt)
        th = 2 * math.pi * rng.random(cnt)
        rho = np.arccosh(1 + u * (math.cosh(R) - 1))
        z = np.tanh(rho / 2) * np.exp(1j * th)
        z = z[_hard_core(z, r0)]
    elif mode == "genus2":
        z = genus2_orbit(wordlen)
        if len(z) > 1:
            dmin = min(hdist(a, b) for i, a in enumerate(z) for b in z[i + 1:])
            if dmin <= r0:
                raise BadParams(f"orbit separation {dmin:.6g} is not above r0={r0}")
    elif mode == "pq":
        p, q = pq
        layers = max(1, int(R / max(pq_edge_length(q, p), 1e-9)) + 1)
        t = gen_pq_tiling(q, p, layers)
        z = from_klein(np.array([complex(x, y) for x, y in t.pos]))
    else:
        raise BadParams(f"unknown mode {mode!r}")
    z = np.asarray(z, dtype=complex)
    z = z[np.abs(z) < math.tanh(R / 2)]
    k = to_klein(z)
    keep = _inside_convex(window_polygon(R, sides), np.stack([k.real, k.imag], axis=1), 1e-12)
    return z[keep]


def genus2_orbit(wordlen: int) -> np.ndarray:
    """Orbit of 0 under reduced words of length ``<= wordlen``, deduplicated by distance < 1e-7."""
    gens = genus2_generators()
    inv = {i: (i + 4) % 8 for i in range(8)}
    pts = [0j]
    frontier = [(np.eye(2, dtype=complex), -1)]
    for _ in range(wordlen):
        nxt = []
        for m, last in frontier:
            for i, g in enumerate(gens):
                if last >= 0 and i == inv[last]:
                    continue
                mm = normalize(m @ g)
                nxt.append((mm, i))
        frontier = nxt
        for m, _ in frontier:
            z = complex(mobius(m, 0j))
            if all(hdist(z, p) >= 1e-7 for p in pts):
                pts.append(z)
    return np.array(pts)


# Dirichlet tessellation ----------------------------------------------------------


@dataclass
class HTiling:
    """Dirichlet tessellation of a site set clipped to a Klein window polygon.

    ``cells[i]`` is the Klein polygon of site ``i`` and ``tags[i][j]`` names
    the neighbouring site across side ``j`` (``-1`` for the window).
    ``basis`` holds one dual cycle ``B_z`` per tessellation vertex strictly
    inside the window.
    """

    sites: np.ndarray
    R: float
    window: np.ndarray
    cells: list
    tags: list
    dual: Window
    basis: TwoBasis
    vertex_cells: list
    vertices: np.ndarray
    stats: dict = field(default_factory=dict)


def _clip(poly, tags, a, b, c, tag):
    """Clip a polygon by ``a x + b y <= c``; ``tags[i]`` labels side ``i -> i+1``.

    Sides created along the clipping line get ``tag``.
    """
    out, otags = [], []
    n = len(poly)
    vals = [a * p[0] + b * p[1] - c for p in poly]
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        vp, vq = vals[i], vals[(i + 1) % n]
        if vp <= 0 and vq <= 0:
            out.append(p)
            otags.append(tags[i])
        elif vp <= 0:
            s = vp / (vp - vq)
            out.append(p)
            otags.append(tags[i])
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
            otags.append(tag)
        elif vq <= 0:
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
            otags.append(tags[i])
    return _dedupe(out, otags)


def _dedupe(poly, tags, eps=1e-15):
    """Drop zero-length sides left by vertices lying exactly on a clip line."""
    changed = True
    while changed and len(poly) > 1:
        changed = False
        for i in range(len(poly)):
            p, q = poly[i], poly[(i + 1) % len(poly)]
            if abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps:
                del poly[i]
                del tags[i]
                changed = True
                break
    return poly, tags


def _cluster(points: np.ndarray, tol: float) -> np.ndarray:
    from scipy.spatial import cKDTree

    tree = cKDTree(points)
    pairs = tree.query_pairs(tol)
    parent = list(range(len(points)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in sorted(pairs):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = [find(i) for i in range(len(points))]
    ids = {}
    return np.array([ids.setdefault(r, len(ids)) for r in roots])


def dirichlet_cells(sites, R: float, sides: int | None = None, tol: float = 1e-10) -> HTiling:
    """Dirichlet cells of ``sites`` (Poincaré points) inside the ``R``-window.

    Cells touching the window polygon are boundary.  Interior cells not
    connected to the cell nearest the origin through interior cells are
    boundary as well, so the interior part is one region.

    Candidate neighbours come from the convex hull of the hyperboloid
    points; each cell is the window polygon clipped by the bisector
    half-planes.  Cell corners closer than ``tol`` are merged into one
    tessellation vertex, so ``k`` co-circular sites give one vertex of
    degree ``k`` and a ``k``-cycle ``B_z``.

    Raises:
        DegenerateSites: duplicate sites, or a site outside the window.
    """
    z = np.asarray(sites, dtype=complex)
    n = len(z)
    win = window_polygon(R, sides)
    if n == 0:
        raise DegenerateSites("no sites")
    kz = to_klein(z)
    kpts = np.stack([kz.real, kz.imag], axis=1)
    if not np.all(_inside_convex(win, kpts)):
        raise DegenerateSites("a site lies outside the window polygon")
    hyp = to_hyperboloid(z)
    cand = [set() for _ in range(n)]
    if n >= 5:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(np.stack([hyp[:, 1], hyp[:, 2], hyp[:, 0]], axis=1))
        for s in hull.simplices:
            for i in range(3):
                for j in range(3):
                    if i != j:
                        cand[s[i]].add(int(s[j]))
    else:
        for i in range(n):
            cand[i] = set(range(n)) - {i}
    for i in range(n):
        for j in cand[i]:
            if np.allclose(hyp[i], hyp[j], atol=1e-12):
                raise DegenerateSites(f"sites {i} and {j} coincide")
    # window sides as half-planes wa . k <= wc
    wn = len(win)
    nxt = np.roll(win, -1, axis=0)
    wa = np.stack([nxt[:, 1] - win[:, 1], win[:, 0] - nxt[:, 0]], axis=1)
    wc = (wa * win).sum(axis=1)
    cells, tags = [], []
    for i in range(n):
        poly = [(-1.5, -1.5), (1.5, -1.5), (1.5, 1.5), (-1.5, 1.5)]
        tg = [-2] * 4
        for j in sorted(cand[i]):
            # s_i0 - s_i.k <= s_j0 - s_j.k  <=>  (s_j - s_i).k <= s_j0 - s_i0
            a = hyp[j, 1] - hyp[i, 1]
            b = hyp[j, 2] - hyp[i, 2]
            c = hyp[j, 0] - hyp[i, 0]
            poly, tg = _clip(poly, tg, a, b, c, j)
        while poly:
            pa = np.array(poly)
            viol = (pa @ wa.T - wc) > 1e-13 * np.hypot(wa[:, 0], wa[:, 1])
            sides_hit = np.nonzero(viol.any(axis=0))[0]
            if len(sides_hit) == 0:
                break
            for k in sides_hit:
                poly, tg = _clip(poly, tg, wa[k, 0], wa[k, 1], wc[k], -1)
        if any(x == -2 for x in tg):
            raise DegenerateSites(f"cell {i} escaped the window clip")
        cells.append(np.array(poly))
        tags.append(tg)
    # corners and clustering
    corner_pts, corner_owner = [], []
    for i, poly in enumerate(cells):
        for k, p in enumerate(poly):
            corner_pts.append(p)
            corner_owner.append((i, k))
    corner_pts = np.array(corner_pts)
    cid = _cluster(corner_pts, tol)
    nclus = int(cid.max()) + 1 if len(cid) else 0
    clus_pts = np.zeros((nclus, 2))
    for idx, c in enumerate(cid):
        clus_pts[c] = corner_pts[idx]
    cell_corner = []
    pos = 0
    for poly in cells:
        cell_corner.append(list(cid[pos:pos + len(poly)]))
        pos += len(poly)
    # rim clusters: touching a window side
    rim = np.zeros(nclus, dtype=bool)
    for i, poly in enumerate(cells):
        for k in range(len(poly)):
            if tags[i][k] == -1:
                rim[cell_corner[i][k]] = True
                rim[cell_corner[i][(k + 1) % len(poly)]] = True
    # dual edges from sides of positive length
    pair_edges: dict = {}
    side_clusters: dict = {}
    boundary = [False] * n
    for i, poly in enumerate(cells):
        m = len(poly)
        for k in range(m):
            a, b = cell_corner[i][k], cell_corner[i][(k + 1) % m]
            if a == b:
                continue
            j = tags[i][k]
            if j == -1:
                boundary[i] = True
                continue
            key = (min(i, j), max(i, j))
            side_clusters.setdefault(key, set()).update((a, b))
    eid = 0
    for key in sorted(side_clusters):
        pair_edges[key] = eid
        eid += 1
    # a cell corner on the rim also makes the cell a boundary cell
    for i in range(n):
        if any(rim[c] for c in cell_corner[i]):
            boundary[i] = True
    edges = {e: key for key, e in pair_edges.items()}
    # interior pockets cut off from the central interior region are rim debris
    pockets = 0
    inner = [i for i in range(n) if not boundary[i]]
    if inner:
        probe = Window(n, edges)
        comps = components(probe, inner)
        centre = min(inner, key=lambda i: (abs(z[i]), i))
        for comp in comps:
            if centre not in comp:
                pockets += len(comp)
                for i in comp:
                    boundary[i] = True
    cyc: dict = {}
    for key, cl in side_clusters.items():
        for c in cl:
            if not rim[c]:
                cyc.setdefault(c, []).append(pair_edges[key])
    basis_cycles = [tuple(sorted(cyc[c])) for c in sorted(cyc)]
    vertex_cells = []
    for c in sorted(cyc):
        vertex_cells.append(tuple(sorted({x for e in cyc[c] for x in edges[e]})))
    dual = Window(n, edges, boundary, [(float(p.real), float(p.imag)) for p in kz])
    basis = TwoBasis.of(basis_cycles)
    verts = np.array([clus_pts[c] for c in sorted(cyc)]) if cyc else np.zeros((0, 2))
    return HTiling(z, R, win, cells, tags, dual, basis, vertex_cells, verts,
                   {"clusters": nclus, "rim_clusters": int(rim.sum()), "pocket_cells": pockets})


def tessellation_euler(t: HTiling) -> tuple:
    """``(V, E, F)`` of the clipped tessellation including the outer face."""
    pts = np.concatenate([c for c in t.cells if len(c)], axis=0)
    cid = _cluster(pts, 1e-10)
    segs = set()
    pos = 0
    for c in t.cells:
        m = len(c)
        ids = cid[pos:pos + m]
        for k in range(m):
            a, b = int(ids[k]), int(ids[(k + 1) % m])
            if a != b:
                segs.add((min(a, b), max(a, b)))
        pos += m
    nv = int(cid.max()) + 1
    return nv, len(segs), len([c for c in t.cells if len(c)]) + 1


def tiling_violations(t: HTiling, r0: float | None = None, r1: float | None = None) -> list:
    """Geometric checks: sites inside cells, area tiling, separation, covering."""
    bad = []
    kz = to_klein(t.sites)
    for i, poly in enumerate(t.cells):
        if len(poly) < 3 or not _inside_convex(poly, np.array([[kz[i].real, kz[i].imag]]))[0]:
            bad.append(f"site {i} is not strictly inside its cell")
    tot = sum(polygon_area_klein(c) for c in t.cells if len(c) >= 3)
    warea = polygon_area_klein(t.window, (0.0, 0.0))
    if abs(tot - warea) > 1e-6 * warea:
        bad.append(f"cell areas {tot:.9g} do not tile the window {warea:.9g}")
    if r0 is not None and len(t.sites) > 1:
        d = min_separation(t.sites)
        if d <= r0:
            bad.append(f"separation {d:.6g} <= r0")
    if r1 is not None:
        cr = max_circumradius(t)
        if cr > r1:
            bad.append(f"circumradius {cr:.6g} > r1")
    return bad


def min_separation(sites) -> float:
    h = to_hyperboloid(sites)
    g = h[:, :1] * h[:, 0] - h[:, 1:2] * h[:, 1] - h[:, 2:3] * h[:, 2]
    np.fill_diagonal(g, np.inf)
    return float(np.arccosh(max(g.min(), 1.0)))


def max_circumradius(t: HTiling) -> float:
    best = 0.0
    for i, poly in enumerate(t.cells):
        if len(poly):
            pz = from_klein(poly[:, 0] + 1j * poly[:, 1])
            best = max(best, float(np.max(hdist(t.sites[i], pz))))
    return best


@dataclass
class TreeingResult:
    tree: Window
    interior: list
    basis: TwoBasis
    report: dict


def interior_part(t: HTiling):
    """Interior dual window (relabelled) and the ``B_z`` lying inside it."""
    inner = [i for i in range(t.dual.n) if not t.dual.boundary[i]]
    sub, old = t.dual.induced(inner)
    sub = sub.with_boundary([])
    keep = [c for c in t.basis.cycles if all(e in sub.edges for e in c)]
    return sub, old, TwoBasis.of(keep)


def tiling_treeing(t: HTiling) -> TreeingResult:
    """Spanning forest of the interior Delaunay dual via its ``B_z`` basis."""
    sub, old, b = interior_part(t)
    rep = validate_two_basis(sub, b)
    if not rep.valid:
        from .errors import InvalidBasis

        raise InvalidBasis(rep.reason)
    tree = treeing_from_basis(sub, b)
    ncomp = len(components(sub))
    report = {"vertices": sub.n, "edges": tree.m, "components": ncomp,
              "acyclic": is_forest(tree), "spanning": len(components(tree)) == ncomp}
    if not (report["acyclic"] and report["spanning"] and tree.m == sub.n - ncomp):
        raise AssertionError(f"treeing failed its invariants: {report}")
    return TreeingResult(tree, old, b, report)


# regular tilings ------------------------------------------------------------------


def pq_edge_length(p: int, q: int) -> float:
    """Edge length of the ``{p, q}`` tiling: ``cosh(l/2) = cos(π/p)/sin(π/q)``."""
    return 2 * math.acosh(math.cos(math.pi / p) / math.sin(math.pi / q))


def gen_pq_tiling(p: int, q: int, layers: int) -> Window:
    """Vertex graph of the ``{p, q}`` tiling out to ``layers`` BFS layers.

    Vertex 0 sits at the origin.  Positions are Klein-model coordinates so
    the straight-line drawing is the geodesic one; the rotation system lists
    neighbours counter-clockwise.  The outermost layer is boundary.

    Raises:
        NotHyperbolic: unless ``(p - 2)(q - 2) > 4``.
    """
    if (p - 2) * (q - 2) <= 4:
        raise NotHyperbolic(f"{{{p},{q}}} is not a hyperbolic tiling")
    ell = pq_edge_length(p, q)
    step = translation(ell)
    turn = [rotation(2 * math.pi * k / q) for k in range(q)]
    back = rotation(math.pi)
    frames = [np.eye(2, dtype=complex)]
    pts = [0j]
    layer = [0]
    index: dict = {}

    def key(zz):
        return (round(zz.real * 1e6), round(zz.imag * 1e6))

    def lookup(zz):
        kx, ky = key(zz)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for v in index.get((kx + dx, ky + dy), ()):
                    if hdist(pts[v], zz) < 1e-6:
                        return v
        return None

    index.setdefault(key(0j), []).append(0)
    nbrs: list = [None]
    frontier = [0]
    for L in range(layers + 1):
        nxt = []
        for v in frontier:
            out = []
            for k in range(q):
                m = normalize(frames[v] @ turn[k] @ step)
                zz = complex(mobius(m, 0j))
                u = lookup(zz)
                if u is None and L < layers:
                    u = len(pts)
                    pts.append(zz)
                    frames.append(normalize(m @ back))
                    layer.append(L + 1)
                    nbrs.append(None)
                    index.setdefault(key(zz), []).append(u)
                    nxt.append(u)
                out.append(u)
            nbrs[v] = out
        frontier = nxt
    n = len(pts)
    edges = {}
    seen = set()
    for v in range(n):
        for u in nbrs[v]:
            if u is not None and (min(u, v), max(u, v)) not in seen:
                seen.add((min(u, v), max(u, v)))
    for i, (a, b) in enumerate(sorted(seen)):
        edges[i] = (a, b)
    eid = {pair: i for i, pair in edges.items()}
    rot = []
    for v in range(n):
        rot.append([eid[(min(u, v), max(u, v))] for u in nbrs[v] if u is not None])
    k = to_klein(np.array(pts))
    pos = [(float(x.real), float(x.imag)) for x in k]
    b = [v for v in range(n) if layer[v] == layers]
    return Window(n, edges, b, pos, rot)


def treeing_cost_stat(w: Window) -> Fraction:
    """Edges per vertex of a generating subgraph, ``|E| / |V|``."""
    return Fraction(w.m, w.n) if w.n else Fraction(0)


def tree_like_fraction(w: Window, radius: int = 3) -> float:
    """Share of vertices whose induced radius-``radius`` ball is a tree."""
    good = 0
    for v in range(w.n):
        dist = {v: 0}
        frontier = [v]
        for d in range(radius):
            nxt = []
            for x in frontier:
                for y in w.neighbors(x):
                    if y not in dist:
                        dist[y] = d + 1
                        nxt.append(y)
            frontier = nxt
        m = 0
        for x in dist:
            for e in w.incident(x):
                if w.other(e, x) in dist:
                    m += 1
        if m // 2 == len(dist) - 1:
            good += 1
    return good / w.n if w.n else 1.0

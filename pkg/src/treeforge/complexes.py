"""Cell complexes, their top-cell dual graphs and dual-forest cell removal.

Cells are stored per dimension as ``{id: faces}`` where ``faces`` lists the
ids of the codimension-one faces.  The dual graph has one vertex per top
cell (index = position in sorted id order) and one edge per (d-1)-cell, with
the edge id equal to the (d-1)-cell id.  Singular (d-1)-cells attach to an
extra virtual vertex that plays the role of infinity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (ForestNotSpanning, MalformedComplex, NotSaturated,
                     StuckNoFreePair, TooLarge)
from .gf2 import XorBasis
from .graph import Window, bfs_dist
from .subforest import ParentForest, extend_subforest, random_weight_forest

MAX_HOMOLOGY_CELLS = 100_000


class CellComplex:
    """Finite regular cell complex given by its face relation.

    Args:
        dim: top dimension d.
        faces: ``faces[k]`` maps each k-cell id to the tuple of its
            (k-1)-face ids; ``faces[0]`` maps vertex ids to ``()``.
        verts: optional vertex tuples per cell, kept for simplicial input.
        check: validate on construction.
    """

    __slots__ = ("dim", "faces", "verts", "_cofaces")

    def __init__(self, dim: int, faces: Sequence[dict], verts=None, check: bool = True):
        if dim < 0 or len(faces) != dim + 1:
            raise MalformedComplex(f"expected {dim + 1} dimension levels, got {len(faces)}")
        self.dim = dim
        self.faces = tuple({int(i): tuple(int(x) for x in fs) for i, fs in level.items()}
                           for level in faces)
        self.verts = verts
        self._cofaces = None
        if check:
            bad = self.violations()
            if bad:
                raise MalformedComplex("; ".join(bad[:5]))

    def __repr__(self):
        return f"CellComplex(dim={self.dim}, counts={self.counts()})"

    def counts(self) -> list:
        return [len(level) for level in self.faces]

    def cells(self) -> set:
        return {(k, i) for k, level in enumerate(self.faces) for i in level}

    def cofaces(self, k: int) -> dict:
        """Map each k-cell to the sorted list of (k+1)-cells having it as a face."""
        if self._cofaces is None:
            co = []
            for j in range(self.dim + 1):
                co.append({i: [] for i in self.faces[j]})
            for j in range(1, self.dim + 1):
                for i, fs in sorted(self.faces[j].items()):
                    for f in fs:
                        if f in co[j - 1]:
                            co[j - 1][f].append(i)
            self._cofaces = co
        return self._cofaces[k]

    def regular(self, tau: int) -> bool:
        """True when the (d-1)-cell ``tau`` is a face of exactly two top cells."""
        return len(self.cofaces(self.dim - 1)[tau]) == 2

    def singular_cells(self) -> list:
        if self.dim == 0:
            return []
        return [t for t, co in sorted(self.cofaces(self.dim - 1).items()) if len(co) == 1]

    def violations(self) -> list:
        bad = []
        for k in range(self.dim + 1):
            for i, fs in self.faces[k].items():
                if k == 0 and fs:
                    bad.append(f"vertex {i} has faces")
                for f in fs:
                    if f not in self.faces[k - 1]:
                        bad.append(f"{k}-cell {i} has missing face {f}")
                if k > 0 and len(set(fs)) != len(fs):
                    bad.append(f"{k}-cell {i} repeats a face")
        if self.dim > 0 and not bad:
            for t, co in self.cofaces(self.dim - 1).items():
                if len(co) not in (1, 2):
                    bad.append(f"({self.dim - 1})-cell {t} is a face of {len(co)} top cells")
        return bad

    def closure(self, cells: Iterable) -> set:
        """Smallest subcomplex containing ``cells`` (pairs ``(k, id)``)."""
        out = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            k, i = c
            if k > 0:
                stack.extend((k - 1, f) for f in self.faces[k][i])
        return out

    def is_subcomplex(self, cells: set) -> bool:
        return all((k - 1, f) in cells for k, i in cells if k > 0 for f in self.faces[k][i])

    def restrict(self, cells: set) -> "CellComplex":
        """Subcomplex on ``cells`` keeping the ids; top dimension is kept."""
        levels = [{i: fs for i, fs in self.faces[k].items() if (k, i) in cells}
                  for k in range(self.dim + 1)]
        return CellComplex(self.dim, levels, check=False)

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        cells = {"0": sorted(self.faces[0])}
        for k in range(1, self.dim + 1):
            cells[str(k)] = [{"id": i, "faces": list(fs)} for i, fs in sorted(self.faces[k].items())]
        return {"dim": self.dim, "cells": cells}

    @classmethod
    def from_json(cls, data: dict) -> "CellComplex":
        try:
            d = int(data["dim"])
            raw = data["cells"]
            levels = []
            for k in range(d + 1):
                items = raw.get(str(k), [])
                level = {}
                for pos, item in enumerate(items):
                    if k == 0:
                        i = item["id"] if isinstance(item, dict) else item
                        level[int(i)] = ()
                    else:
                        level[int(item.get("id", pos))] = tuple(item["faces"])
                levels.append(level)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise MalformedComplex(f"bad complex JSON: {exc!r}") from exc
        return cls(d, levels)


def from_simplices(simplices: Iterable[Sequence[int]]) -> CellComplex:
    """Simplicial complex generated by the given top simplices.

    Every face of every simplex is added.  Cell ids in each dimension follow
    the sorted order of the vertex tuples.
    """
    tops = [tuple(sorted(s)) for s in simplices]
    if not tops:
        raise MalformedComplex("no simplices")
    d = len(tops[0]) - 1
    if any(len(s) != d + 1 or len(set(s)) != d + 1 for s in tops):
        raise MalformedComplex("simplices must share a dimension and have distinct vertices")
    by_dim = [set() for _ in range(d + 1)]
    for s in tops:
        for k in range(d + 1):
            by_dim[k].update(itertools.combinations(s, k + 1))
    verts = [sorted(level) for level in by_dim]
    index = [{t: i for i, t in enumerate(level)} for level in verts]
    faces = [{i: () for i in range(len(verts[0]))}]
    for k in range(1, d + 1):
        level = {}
        for i, t in enumerate(verts[k]):
            level[i] = tuple(index[k - 1][t[:j] + t[j + 1:]] for j in range(k + 1))
        faces.append(level)
    return CellComplex(d, faces, verts=verts)


# dual graph --------------------------------------------------------------


@dataclass(frozen=True)
class ComplexDual:
    """Top-cell dual graph.

    ``window`` has vertex ``j`` for top cell ``top_ids[j]`` and edge id ``t``
    for the (d-1)-cell ``t``; ``virtual`` is the index of the infinity vertex
    (``None`` when every (d-1)-cell is regular).
    """

    complex: CellComplex
    window: Window
    top_ids: tuple
    virtual: int | None
    index: dict

    def d_d(self, v: int) -> int:
        """D_d: dual vertex to top cell id."""
        return self.top_ids[v]

    def d_d1(self, e: int) -> int:
        """D_{d-1}: dual edge to (d-1)-cell id (the identity on ids)."""
        return e


def build_complex_dual(c: CellComplex) -> ComplexDual:
    """Dual graph of the top cells, with singular faces leading to infinity."""
    if c.dim == 0:
        raise MalformedComplex("dual graph needs top dimension at least 1")
    bad = c.violations()
    if bad:
        raise MalformedComplex("; ".join(bad[:5]))
    top_ids = tuple(sorted(c.faces[c.dim]))
    idx = {cell: j for j, cell in enumerate(top_ids)}
    co = c.cofaces(c.dim - 1)
    singular = any(len(x) == 1 for x in co.values())
    virtual = len(top_ids) if singular else None
    edges = {}
    for t, cs in sorted(co.items()):
        if len(cs) == 2:
            edges[t] = (idx[cs[0]], idx[cs[1]])
        else:
            edges[t] = (idx[cs[0]], virtual)
    n = len(top_ids) + (1 if singular else 0)
    boundary = [virtual] if singular else []
    return ComplexDual(c, Window(n, edges, boundary), top_ids, virtual, idx)


# oriented forests ----------------------------------------------------------


@dataclass(frozen=True)
class OrientedForest:
    """Outgoing dual edge ``out[v]`` and its head ``head[v]`` per dual vertex.

    Vertices without an outgoing edge (the virtual vertex, and roots of
    finite trees) are absent from both maps.
    """

    out: dict
    head: dict
    n: int
    virtual: int | None
    back: dict = field(default_factory=dict)

    @classmethod
    def from_parent_forest(cls, dual: ComplexDual, f: ParentForest) -> "OrientedForest":
        back = {v: [] for v in range(dual.window.n)}
        for x, y in sorted(f.parent.items()):
            back[y].append(x)
        return cls(dict(f.parent_edge), dict(f.parent), dual.window.n, dual.virtual, back)

    def iota(self) -> dict:
        """Map each forest edge to the vertex it leaves (iota)."""
        return {e: v for v, e in self.out.items()}

    def back_orbit(self, v: int) -> list:
        """All dual vertices whose forward orbit passes through ``v`` (``v`` included)."""
        seen = [v]
        stack = [v]
        while stack:
            x = stack.pop()
            for y in self.back.get(x, ()):
                seen.append(y)
                stack.append(y)
        return sorted(seen)

    def violations(self, dual: ComplexDual) -> list:
        """Acyclic, spanning toward infinity, out edges are dual edges."""
        bad = []
        w = dual.window
        for v, e in self.out.items():
            if e not in w.edges or set(w.edges[e]) != {v, self.head[v]} and w.edges[e] != (v, v):
                bad.append(f"out edge {e} of {v} does not join it to {self.head[v]}")
        for v in range(w.n):
            if v == self.virtual:
                continue
            x, steps = v, 0
            while x in self.head and steps <= w.n:
                x = self.head[x]
                steps += 1
            if x != self.virtual:
                bad.append(f"orbit of dual vertex {v} ends at {x}, not at infinity")
        return bad

    def to_json(self) -> dict:
        return {"out": {str(v): e for v, e in sorted(self.out.items())},
                "head": {str(v): h for v, h in sorted(self.head.items())}}


def dual_forest(dual: ComplexDual, seed: int | None = None) -> OrientedForest:
    """Spanning dual forest rooted at infinity.

    ``seed=None`` gives the BFS forest toward the virtual vertex; an integer
    seed gives the wired minimal spanning forest under random weights.
    """
    w = dual.window
    if dual.virtual is None:
        raise ForestNotSpanning("closed complex: the dual has no vertex at infinity")
    if seed is None:
        f = extend_subforest(w, [dual.virtual], ParentForest({}, {}, (dual.virtual,), {}))
    else:
        f = random_weight_forest(w, seed, wired=True)
    return OrientedForest.from_parent_forest(dual, f)


def _require_spanning(dual: ComplexDual, f: OrientedForest):
    missing = [v for v in range(len(dual.top_ids)) if v not in f.out]
    if missing:
        raise ForestNotSpanning(f"top cell {dual.top_ids[missing[0]]} has no outgoing edge")
    bad = f.violations(dual)
    if bad:
        raise ForestNotSpanning(bad[0])


def ominus_star_complex(c: CellComplex, f: OrientedForest, dual: ComplexDual | None = None) -> CellComplex:
    """Remove every top cell and every (d-1)-cell carrying a forest edge.

    The result has top dimension d-1 and keeps all cell ids.
    """
    dual = dual or build_complex_dual(c)
    _require_spanning(dual, f)
    gone = set(f.out.values())
    levels = [dict(level) for level in c.faces[:c.dim]]
    levels[c.dim - 1] = {t: fs for t, fs in levels[c.dim - 1].items() if t not in gone}
    return CellComplex(c.dim - 1, levels, check=False)


# back-orbit saturation -----------------------------------------------------


def _orbit_cells(dual: ComplexDual, f: OrientedForest, tau: int, iota: dict) -> set:
    """Cells of the back-orbit saturation of the dual edge ``tau``."""
    out = {(dual.complex.dim - 1, tau)}
    v = iota.get(tau)
    if v is None:
        return out
    d = dual.complex.dim
    for x in f.back_orbit(v):
        out.add((d, dual.top_ids[x]))
        out.add((d - 1, f.out[x]))
    return out


def back_orbit_saturate(c: CellComplex, f: OrientedForest, seed: Iterable,
                        close: bool = True, dual: ComplexDual | None = None) -> set:
    """Back-orbit saturation of a finite cell set (pairs ``(k, id)``).

    With ``close`` the result is also closed under faces, iterating until
    both closures agree, so it is a saturated subcomplex.  Without it this is
    the plain union of ``seed`` with the back-orbits of its (d-1)-cells.
    """
    dual = dual or build_complex_dual(c)
    iota = f.iota()
    d = c.dim
    cells = set(seed)
    done = set()
    while True:
        pending = [i for k, i in cells if k == d - 1 and i not in done]
        if close:
            closed = c.closure(cells)
            pending = [i for k, i in closed if k == d - 1 and i not in done]
            cells = closed
        if not pending:
            return cells
        for t in pending:
            done.add(t)
            cells |= _orbit_cells(dual, f, t, iota)
        if not close:
            return cells


def is_saturated(c: CellComplex, f: OrientedForest, cells: set, dual: ComplexDual | None = None) -> bool:
    return back_orbit_saturate(c, f, cells, close=False, dual=dual) == set(cells)


# collapse -----------------------------------------------------------------


@dataclass(frozen=True)
class CollapseResult:
    """Free pairs removed in order and the remaining cell set."""

    steps: list
    remainder: set
    target: set

    def to_json(self) -> dict:
        return {"steps": [list(s) for s in self.steps], "n_steps": len(self.steps),
                "remainder_counts": _count(self.remainder), "matches_target": self.remainder == self.target}


def _count(cells) -> dict:
    out = {}
    for k, _ in cells:
        out[str(k)] = out.get(str(k), 0) + 1
    return dict(sorted(out.items()))


def collapse_retract(c: CellComplex, f: OrientedForest, k: Iterable, dual: ComplexDual | None = None) -> CollapseResult:
    """Collapse a saturated subcomplex onto its part in the removed complex.

    Repeatedly takes the least top cell of ``k``, walks its forest path
    toward infinity, and removes the pair (D_d(v), D_{d-1}(o(v))) for the
    last path vertex v still inside the current complex.  Each pair is
    checked to be an elementary collapse.

    Raises:
        NotSaturated: ``k`` is not a face-closed, back-orbit-saturated set.
        StuckNoFreePair: a chosen pair is not free (carries the state).
    """
    dual = dual or build_complex_dual(c)
    _require_spanning(dual, f)
    cur = set(k)
    if not c.is_subcomplex(cur):
        raise NotSaturated("cell set is not closed under faces")
    if not is_saturated(c, f, cur, dual):
        raise NotSaturated("cell set is not back-orbit saturated")
    d = c.dim
    gone = set(f.out.values())
    target = {(j, i) for j, i in cur if j < d - 1 or (j == d - 1 and i not in gone)}
    co = c.cofaces(d - 1)
    alive = {i for j, i in cur if j == d}
    steps = []
    for eps in sorted(alive):
        while eps in alive:
            last = x = dual.index[eps]
            while f.head.get(x, dual.virtual) != dual.virtual:
                x = f.head[x]
                if dual.top_ids[x] in alive:
                    last = x
            sigma, tau = dual.top_ids[last], f.out[last]
            holders = [s for s in co[tau] if s in alive]
            if (d - 1, tau) not in cur or holders != [sigma]:
                raise StuckNoFreePair(f"pair ({sigma}, {tau}) is not free",
                                      {"steps": steps, "alive_top": sorted(alive)})
            cur -= {(d, sigma), (d - 1, tau)}
            alive.discard(sigma)
            steps.append((sigma, tau))
    return CollapseResult(steps, cur, target)


# homology -------------------------------------------------------------------


def boundary_rank(c: CellComplex, k: int, cells: set | None = None) -> int:
    """GF(2) rank of the boundary map from k-cells to (k-1)-cells."""
    if k <= 0 or k > c.dim:
        return 0
    rows = {f: r for r, f in enumerate(sorted(c.faces[k - 1]))}
    basis = XorBasis()
    for i, fs in sorted(c.faces[k].items()):
        if cells is not None and (k, i) not in cells:
            continue
        bits = 0
        for f in fs:
            bits ^= 1 << rows[f]
        basis.add(bits)
    return len(basis)


def homology_gf2(c: CellComplex, cells: set | None = None) -> list:
    """Reduced Betti numbers over GF(2) in dimensions 0..d.

    An empty complex reports all zeros.

    Raises:
        TooLarge: more than 100000 cells.
    """
    counts = [len(level) if cells is None else sum(1 for i in level if (k, i) in cells)
              for k, level in enumerate(c.faces)]
    if sum(counts) > MAX_HOMOLOGY_CELLS:
        raise TooLarge(f"{sum(counts)} cells exceed the homology limit {MAX_HOMOLOGY_CELLS}")
    if counts[0] == 0:
        return [0] * (c.dim + 1)
    ranks = [1] + [boundary_rank(c, k, cells) for k in range(1, c.dim + 1)] + [0]
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(c.dim + 1)]


# quasi-isometry sanity check -----------------------------------------------


@dataclass(frozen=True)
class QIReport:
    growth_a: list
    growth_b: list
    constant: float
    drift: float
    c_max: float
    drift_max: float
    ok: bool

    def to_json(self) -> dict:
        return {"growth_a": self.growth_a, "growth_b": self.growth_b,
                "constant": round(self.constant, 9), "drift": round(self.drift, 9),
                "c_max": self.c_max, "drift_max": self.drift_max, "ok": self.ok}


def growth(w: Window, center: int, radius: int) -> list:
    d = bfs_dist(w, [center])
    out = [0] * (radius + 1)
    for x in d:
        if 0 <= x <= radius:
            out[x] += 1
    return list(itertools.accumulate(out))


def _reach(w: Window, center: int) -> int:
    """Largest radius whose ball avoids the boundary (eccentricity without one)."""
    d = bfs_dist(w, [center])
    bd = [d[v] for v in range(w.n) if w.boundary[v] and d[v] >= 0]
    return (min(bd) - 1) if bd else max(d)


def dual_qi_check(a: Window, center_a: int, b: Window, center_b: int,
                  radius: int | None = None, c_max: float = 10.0,
                  drift_max: float = 1.5) -> QIReport:
    """Compare ball growth of two windows around their centers.

    ``constant`` is the largest ratio between the two ball sizes (either way
    round) over radii 1..R.  ``drift`` compares the ratio at R with the ratio
    at R/2; growth of different type shows up as drift even while the
    constant is still small.  The sandwich holds when both stay in bounds.
    """
    r = radius if radius is not None else min(_reach(a, center_a), _reach(b, center_b))
    r = max(r, 0)
    ga, gb = growth(a, center_a, r), growth(b, center_b, r)
    const = 1.0
    for x, y in zip(ga[1:], gb[1:]):
        const = max(const, x / y, y / x)
    drift = 1.0
    if r >= 2:
        h = (r + 1) // 2
        q = (ga[r] / gb[r]) / (ga[h] / gb[h])
        drift = max(q, 1 / q)
    return QIReport(ga, gb, const, drift, c_max, drift_max, const <= c_max and drift <= drift_max)


def complex_dual_center(dual: ComplexDual) -> int:
    """Real dual vertex farthest from infinity (least index on ties)."""
    w = dual.window
    if dual.virtual is None:
        return 0
    d = bfs_dist(w, [dual.virtual])
    best = max(range(len(dual.top_ids)), key=lambda v: (d[v], -v))
    return best


# generators -----------------------------------------------------------------


def point() -> CellComplex:
    return CellComplex(0, [{0: ()}])


def circle(m: int = 3) -> CellComplex:
    return from_simplices([(i, (i + 1) % m) for i in range(m)])


def simplex(d: int) -> CellComplex:
    return from_simplices([tuple(range(d + 1))])


def simplex_boundary(d: int) -> CellComplex:
    """Boundary of the d-simplex, a triangulated (d-1)-sphere."""
    return from_simplices(itertools.combinations(range(d + 1), d))


def disk(n: int) -> CellComplex:
    """Triangulated square disk: an n x n grid of squares, each cut in two."""
    def vid(r, c):
        return r * (n + 1) + c
    tris = []
    for r in range(n):
        for c in range(n):
            a, b, cc, dd = vid(r, c), vid(r, c + 1), vid(r + 1, c), vid(r + 1, c + 1)
            tris.append((a, b, dd))
            tris.append((a, cc, dd))
    return from_simplices(tris)


_KUHN = list(itertools.permutations(range(3)))


def _kuhn_cube(corner, vid):
    out = []
    for perm in _KUHN:
        p = list(corner)
        tet = [vid(*p)]
        for axis in perm:
            p[axis] += 1
            tet.append(vid(*p))
        out.append(tuple(tet))
    return out


def ball(n: int) -> CellComplex:
    """Triangulated cube: n^3 unit cubes, each split into 6 Kuhn tetrahedra."""
    def vid(x, y, z):
        return (x * (n + 1) + y) * (n + 1) + z
    tets = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                tets.extend(_kuhn_cube((x, y, z), vid))
    return from_simplices(tets)


def torus3(n: int) -> CellComplex:
    """Kuhn triangulation of the 3-torus (n >= 3 cubes per side)."""
    if n < 3:
        raise MalformedComplex("torus3 needs n >= 3 to stay simplicial")

    def vid(x, y, z):
        return ((x % n) * n + y % n) * n + z % n
    tets = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                tets.extend(_kuhn_cube((x, y, z), vid))
    return from_simplices(tets)


def read_off(text: str, dim: int = 2) -> CellComplex:
    """Parse an OFF mesh.

    With ``dim=2`` each face line is a polygon and must be a triangle; with
    ``dim=3`` each face line lists the four vertices of a tetrahedron.
    Coordinates are ignored.
    """
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("OFF"):
        raise MalformedComplex("missing OFF header")
    head = lines[0][3:].split() or lines[1].split()
    start = 1 if lines[0][3:].split() else 2
    try:
        nv, nf = int(head[0]), int(head[1])
        simplices = []
        for ln in lines[start + nv:start + nv + nf]:
            parts = [int(x) for x in ln.split()]
            k = parts[0]
            if k != dim + 1:
                raise MalformedComplex(f"face with {k} vertices in a dim {dim} OFF mesh")
            simplices.append(tuple(parts[1:1 + k]))
    except (IndexError, ValueError) as exc:
        raise MalformedComplex(f"bad OFF body: {exc!r}") from exc
    if len(simplices) != nf:
        raise MalformedComplex(f"expected {nf} faces, found {len(simplices)}")
    return from_simplices(simplices)


GENERATORS = {
    "point": lambda: point(),
    "circle": circle,
    "simplex": simplex,
    "sphere": simplex_boundary,
    "disk": disk,
    "ball": ball,
    "torus3": torus3,
}

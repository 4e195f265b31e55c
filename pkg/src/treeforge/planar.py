"""2-bases, dual graphs and the ⊖* edge removal.

Dual edge ids coincide with primal edge ids, so the star map ``e -> e*`` is
the identity on the ids of edges lying in two basis cycles (and, with a
virtual outer vertex, also on those lying in exactly one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidBasis, NonPlanarRotation, PreconditionViolated, UnknownDualEdge
from .gf2 import XorBasis, to_bits
from .graph import Window, components, cycle_space_rank, is_forest, is_simple_cycle


@dataclass(frozen=True)
class TwoBasis:
    """Ordered simple cycles over a window's edge ids.

    ``outer`` holds the omitted outer face of each block when the basis came
    from face tracing.
    """

    cycles: tuple
    outer: tuple = ()

    @classmethod
    def of(cls, cycles: Iterable[Iterable[int]], outer=()) -> "TwoBasis":
        return cls(tuple(tuple(c) for c in cycles), tuple(tuple(c) for c in outer))

    def with_outer(self) -> "TwoBasis":
        """All facial cycles, outer faces included."""
        return TwoBasis(self.cycles + self.outer, ())

    def to_json(self):
        out = {"cycles": [list(c) for c in self.cycles]}
        if self.outer:
            out["outer"] = [list(c) for c in self.outer]
        return out

    @classmethod
    def from_json(cls, data):
        return cls.of(data["cycles"], data.get("outer", ()))


@dataclass(frozen=True)
class BasisReport:
    valid: bool
    reason: str = ""
    edge: int | None = None
    rank: int = 0
    expected_rank: int = 0

    def to_json(self):
        return {"valid": self.valid, "reason": self.reason, "edge": self.edge,
                "rank": self.rank, "expected_rank": self.expected_rank}


def edge_multiplicity(w: Window, b: TwoBasis) -> dict:
    mult = {e: 0 for e in w.edges}
    for c in b.cycles:
        for e in set(c):
            mult[e] = mult.get(e, 0) + 1
    return mult


def validate_two_basis(w: Window, b: TwoBasis) -> BasisReport:
    """Check the two defining conditions of a 2-basis.

    Violations are returned as values: the first edge (least id) lying in
    more than two cycles, a cycle that is not simple, or a rank deficit.
    """
    expected = cycle_space_rank(w)
    for i, c in enumerate(b.cycles):
        if any(e not in w.edges for e in c):
            return BasisReport(False, f"cycle {i} references an unknown edge", None, 0, expected)
        if not is_simple_cycle(w, c):
            return BasisReport(False, f"cycle {i} is not a simple cycle", None, 0, expected)
    mult = edge_multiplicity(w, b)
    for e in sorted(mult):
        if mult[e] > 2:
            return BasisReport(False, "edge in more than two cycles", e, 0, expected)
    basis = XorBasis()
    for c in b.cycles:
        basis.add(to_bits(c))
    r = len(basis)
    if r < expected:
        return BasisReport(False, "rank deficit", None, r, expected)
    return BasisReport(True, "", None, r, expected)


# blocks ------------------------------------------------------------------


def blocks(w: Window) -> list:
    """Biconnected blocks as sorted edge-id lists, ordered by least edge id.

    Bridges are blocks of one edge; parallel edges share a block.
    """
    disc = [-1] * w.n
    low = [0] * w.n
    timer = 0
    stack_e: list = []
    out = []
    for root in range(w.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        # frames: (vertex, parent edge, incident list, index)
        frames = [(root, None, sorted(w.incident(root)), 0)]
        while frames:
            v, pe, inc, i = frames[-1]
            if i < len(inc):
                frames[-1] = (v, pe, inc, i + 1)
                e = inc[i]
                if e == pe:
                    continue
                u = w.other(e, v)
                if disc[u] < 0:
                    stack_e.append(e)
                    disc[u] = low[u] = timer
                    timer += 1
                    frames.append((u, e, sorted(w.incident(u)), 0))
                elif disc[u] < disc[v]:
                    stack_e.append(e)
                    low[v] = min(low[v], disc[u])
            else:
                frames.pop()
                if frames:
                    p = frames[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        comp = []
                        while True:
                            e = stack_e.pop()
                            comp.append(e)
                            if e == pe:
                                break
                        out.append(sorted(comp))
    out.sort(key=lambda c: c[0])
    return out


def is_two_connected(w: Window) -> bool:
    return w.n >= 3 and len(components(w)) == 1 and len(blocks(w)) == 1


# face tracing ------------------------------------------------------------


def _signed_area(w: Window, walk: Sequence[tuple]) -> float:
    s = 0.0
    for _, a, b in walk:
        (x0, y0), (x1, y1) = w.pos[a], w.pos[b]
        s += x0 * y1 - x1 * y0
    return s / 2.0


def _trace_block(w: Window, bedges: list, rotation) -> list:
    """Faces of one block as lists of darts ``(edge, tail, head)``."""
    bset = set(bedges)
    verts = sorted({x for e in bedges for x in w.edges[e]})
    rot = {v: [e for e in rotation[v] if e in bset] for v in verts}
    for v in verts:
        if sorted(rot[v]) != sorted(e for e in w.incident(v) if e in bset):
            raise NonPlanarRotation(f"rotation at vertex {v} does not list its incident edges")
    where = {}
    for v in verts:
        for i, e in enumerate(rot[v]):
            where[(v, e)] = i
    used = set()
    faces = []
    for e in bedges:
        u, v = w.edges[e]
        for tail, head in ((u, v), (v, u)):
            if (e, tail) in used:
                continue
            walk = []
            ce, ct, ch = e, tail, head
            while (ce, ct) not in used:
                used.add((ce, ct))
                walk.append((ce, ct, ch))
                r = rot[ch]
                ne = r[(where[(ch, ce)] + 1) % len(r)]
                ct, ch = ch, w.other(ne, ch)
                ce = ne
            if (ce, ct) != (e, tail):
                raise NonPlanarRotation("face trace re-entered a used dart before closing")
            faces.append(walk)
    return faces


def facial_cycles(w: Window, rotation=None) -> TwoBasis:
    """Trace the faces of every block of an embedded window.

    The outer face of each block is dropped from the basis and kept in
    ``outer``.  With positions the outer face is the one with the extremal
    signed area; otherwise the longest face (ties to the lexicographically
    least edge-id tuple).

    Raises:
        NonPlanarRotation: when Euler's formula fails on a block or a face
            is not a simple cycle.
    """
    rotation = rotation if rotation is not None else w.rotation
    if rotation is None:
        raise NonPlanarRotation("window has no rotation system")
    cycles, outer = [], []
    for be in blocks(w):
        if len(be) == 1:
            continue
        faces = _trace_block(w, be, rotation)
        nv = len({x for e in be for x in w.edges[e]})
        if nv - len(be) + len(faces) != 2:
            raise NonPlanarRotation(f"Euler check failed on block starting at edge {be[0]}")
        cyc = [tuple(d[0] for d in f) for f in faces]
        for c in cyc:
            if not is_simple_cycle(w, c):
                raise NonPlanarRotation("a facial walk of a block is not a simple cycle")
        oi = None
        if w.pos is not None:
            areas = [_signed_area(w, f) for f in faces]
            lo = min(range(len(faces)), key=lambda i: (areas[i], i))
            hi = max(range(len(faces)), key=lambda i: (areas[i], -i))
            # exactly one face has the opposite orientation to the rest
            if sum(1 for a in areas if a < 0) == 1 and areas[lo] < -1e-12:
                oi = lo
            elif sum(1 for a in areas if a > 0) == 1 and areas[hi] > 1e-12:
                oi = hi
        if oi is None:
            oi = max(range(len(cyc)), key=lambda i: (len(cyc[i]), tuple(-x for x in sorted(cyc[i]))))
        for i, c in enumerate(cyc):
            (outer if i == oi else cycles).append(c)
    return TwoBasis.of(cycles, outer)


# duals --------------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    """Dual of a window with respect to a 2-basis.

    Vertex ``i < len(basis.cycles)`` is basis cycle ``i``; ``virtual`` is the
    index of the added outer vertex, or None.
    """

    window: Window
    basis: TwoBasis
    virtual: int | None
    star: dict = field(default_factory=dict)

    def to_json(self):
        return {"window": self.window.to_json(), "virtual": self.virtual,
                "star": {str(k): v for k, v in sorted(self.star.items())}}


def build_dual(w: Window, b: TwoBasis, attach_virtual_outer: bool = True) -> DualGraph:
    rep = validate_two_basis(w, b)
    if not rep.valid:
        raise InvalidBasis(rep.reason + (f" (edge {rep.edge})" if rep.edge is not None else ""))
    k = len(b.cycles)
    owners: dict[int, list] = {e: [] for e in w.edges}
    for i, c in enumerate(b.cycles):
        for e in set(c):
            owners[e].append(i)
    virtual = k if attach_virtual_outer else None
    edges = {}
    for e in sorted(owners):
        o = owners[e]
        if len(o) == 2:
            edges[e] = (o[0], o[1])
        elif len(o) == 1 and virtual is not None:
            edges[e] = (o[0], virtual)
    n = k + (1 if virtual is not None else 0)
    bd = [virtual] if virtual is not None else []
    dw = Window(n, edges, bd)
    return DualGraph(dw, b, virtual, {e: e for e in edges})


def ominus_star(w: Window, d: DualGraph, sub: Iterable[int]) -> Window:
    """Remove every primal edge whose dual edge is in ``sub``."""
    s = set(sub)
    bad = sorted(x for x in s if x not in d.window.edges)
    if bad:
        raise UnknownDualEdge(f"dual edge {bad[0]} does not exist")
    primal = {e for e, de in d.star.items() if de in s}
    return w.with_edges(e for e in w.edges if e not in primal)


@dataclass(frozen=True)
class DoubleDualResult:
    isomorphic: bool
    vertex_map: dict
    edge_map: dict
    x_star: tuple
    double_dual: Window
    reason: str = ""

    def to_json(self):
        return {"isomorphic": self.isomorphic, "reason": self.reason,
                "vertex_map": {str(k): v for k, v in self.vertex_map.items()}}


def double_dual(w: Window, b: TwoBasis) -> DoubleDualResult:
    """Build ``G**`` through the vertex stars ``x* = {e* : e incident with x}``.

    Raises:
        PreconditionViolated: unless every edge lies in exactly two cycles
            and ``w`` is 2-connected.
    """
    mult = edge_multiplicity(w, b)
    for e in sorted(mult):
        if mult[e] != 2:
            raise PreconditionViolated(f"edge {e} lies in {mult[e]} cycles, need exactly 2")
    if not is_two_connected(w):
        raise PreconditionViolated("window is not 2-vertex-connected")
    d = build_dual(w, b, attach_virtual_outer=False)
    xs = tuple(tuple(sorted(d.star[e] for e in set(w.incident(x)))) for x in range(w.n))
    xb = TwoBasis.of(xs)
    rep = validate_two_basis(d.window, xb)
    if not rep.valid:
        return DoubleDualResult(False, {}, {}, xs, Window(0), "vertex stars are not a 2-basis: " + rep.reason)
    dd = build_dual(d.window, xb, attach_virtual_outer=False)
    vmap = {x: x for x in range(w.n)}
    emap = {e: dd.star[d.star[e]] for e in w.edges}
    ok = True
    reason = ""
    for e, (u, v) in w.edges.items():
        a, c = dd.window.edges[emap[e]]
        if {a, c} != {vmap[u], vmap[v]}:
            ok, reason = False, f"edge {e} not preserved"
            break
    if ok and (dd.window.n != w.n or dd.window.m != w.m):
        ok, reason = False, "size mismatch"
    return DoubleDualResult(ok, vmap, emap, xs, dd.window, reason)


# duality ------------------------------------------------------------------


@dataclass(frozen=True)
class DualityReport:
    acyclic: bool
    aperiodic_dual: bool
    spanning_tree: bool
    dual_spanning_tree: bool
    one_ended_forest_dual: bool
    agree_acyclic: bool
    agree_tree: bool
    certificate: dict

    def to_json(self):
        return {k: getattr(self, k) for k in (
            "acyclic", "aperiodic_dual", "spanning_tree", "dual_spanning_tree",
            "one_ended_forest_dual", "agree_acyclic", "agree_tree", "certificate")}


def _find_cycle(w: Window):
    """Edge ids of some cycle in ``w`` or None."""
    from .graph import fundamental_cycles

    cyc = fundamental_cycles(w)
    return cyc[0] if cyc else None


def duality_check(w: Window, b: TwoBasis, d: DualGraph, sub: Iterable[int]) -> DualityReport:
    """Evaluate both sides of the acyclic and spanning-tree dualities.

    The virtual outer vertex stands for infinity: a dual component is
    "infinite" when it contains it.
    """
    s = sorted(set(sub))
    h = ominus_star(w, d, s)
    ds = d.window.with_edges(s)
    acyclic = is_forest(h)
    comps = components(ds)
    finite = [c for c in comps if d.virtual is None or d.virtual not in c]
    aperiodic = not finite
    spanning_tree = acyclic and len(components(h)) == 1
    dual_tree = is_forest(ds) and len(comps) == 1
    one_ended = dual_tree and d.virtual is not None
    cert = {}
    if not acyclic:
        cert["primal_cycle"] = _find_cycle(h)
    if finite:
        cert["finite_dual_component"] = finite[0]
    return DualityReport(acyclic, aperiodic, spanning_tree, dual_tree, one_ended,
                         acyclic == aperiodic, spanning_tree == dual_tree, cert)


# pipelines -----------------------------------------------------------------


def treeing_from_basis(w: Window, b: TwoBasis) -> Window:
    """Acyclic spanning subgraph from a 2-basis via a dual forest rooted at infinity."""
    from .subforest import ParentForest, extend_subforest

    d = build_dual(w, b, attach_virtual_outer=True)
    root = d.virtual
    seed = ParentForest({}, {}, (root,), {root: 0})
    f = extend_subforest(d.window, {root}, seed)
    return ominus_star(w, d, f.parent_edge.values())


def planar_treeing(w: Window, rotation=None) -> Window:
    """Spanning forest of an embedded window (one tree per component)."""
    return treeing_from_basis(w, facial_cycles(w, rotation))

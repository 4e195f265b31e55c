"""One-ended spanning subforests of windows.

A forest is stored as a parent map: each non-root vertex points to a
neighbour.  On a window, "one-ended" means every tree that meets the boundary
is rooted at a boundary vertex, i.e. all orbits flow out to infinity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (AMissesComponent, Condition4Violated, CyclicInput, NoEscape,
                     NotLineForest, NotOneEnded, TwoEndedObstruction, WindowError)
from .graph import Window, bfs_dist, classify_ends, components, greedy_coloring


@dataclass(frozen=True)
class ParentForest:
    """Partial parent map with the layer tag of each edge's producer."""

    parent: dict
    parent_edge: dict
    roots: tuple
    layer: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def edge_ids(self) -> list:
        return sorted(self.parent_edge.values())

    def as_window(self, w: Window) -> Window:
        return w.with_edges(self.parent_edge.values())

    def to_json(self) -> dict:
        return {
            "parent": {str(x): y for x, y in sorted(self.parent.items())},
            "roots": list(self.roots),
            "layer": {str(x): n for x, n in sorted(self.layer.items())},
        }

    @classmethod
    def from_json(cls, w: Window, data: dict) -> "ParentForest":
        parent = {int(k): int(v) for k, v in data["parent"].items()}
        return from_parent_map(w, parent, {int(k): int(v) for k, v in data.get("layer", {}).items()})


def from_parent_map(w: Window, parent: Mapping[int, int], layer=None) -> ParentForest:
    """Wrap a vertex parent map, picking the least edge id for each pair."""
    pe = {}
    for x, y in parent.items():
        e = w.edge_between(x, y)
        if e is None:
            raise WindowError(f"({x}, {y}) is not an edge of the window")
        pe[x] = e
    roots = tuple(v for v in range(w.n) if v not in parent)
    return ParentForest(dict(parent), pe, roots, dict(layer or {}))


def forest_violations(w: Window, f: ParentForest) -> list:
    """Run the full invariant suite; an empty list means the forest is valid.

    Checks: parent pairs are window edges, out-degree at most one, no
    directed cycles, interior vertices covered, and every tree that meets
    the boundary has a boundary root.
    """
    bad = []
    for x, y in f.parent.items():
        e = f.parent_edge.get(x)
        if e is None or e not in w.edges or set(w.edges[e]) != {x, y}:
            bad.append(f"parent pair ({x}, {y}) is not window edge {e}")
    if set(f.roots) != {v for v in range(w.n) if v not in f.parent}:
        bad.append("root set disagrees with the parent map")
    # orbit termination and root lookup
    root_of = [-1] * w.n
    state = [0] * w.n
    for s in range(w.n):
        if state[s]:
            continue
        trail = []
        x = s
        while x in f.parent and state[x] == 0:
            state[x] = 1
            trail.append(x)
            x = f.parent[x]
        if state[x] == 1:
            bad.append(f"directed cycle through vertex {x}")
            for t in trail:
                state[t] = 2
            continue
        r = x if x not in f.parent else root_of[x]
        state[x] = 2
        if root_of[x] < 0:
            root_of[x] = r
        for t in trail:
            state[t] = 2
            root_of[t] = r
    for comp in components(w):
        touches = any(w.boundary[v] for v in comp)
        roots = [v for v in comp if v not in f.parent]
        if touches:
            for r in roots:
                if not w.boundary[r]:
                    bad.append(f"interior vertex {r} is a root in a boundary-reaching component")
        elif len(roots) != 1:
            bad.append(f"finite component {comp[0]} has {len(roots)} roots")
    return bad


def layer_monotone(f: ParentForest, w: Window) -> bool:
    """True when the layer tag never decreases along parent steps (boundary escapes excepted)."""
    for x, y in f.parent.items():
        if y in f.layer and x in f.layer and not w.boundary[y] and f.layer[y] < f.layer[x]:
            return False
    return True


# gluing -----------------------------------------------------------------


def _functional_cycle(fi: Mapping[int, int]):
    state: dict[int, int] = {}
    for s in sorted(fi):
        if s in state:
            continue
        trail = []
        x = s
        while x in fi and x not in state:
            state[x] = 1
            trail.append(x)
            x = fi[x]
        if state.get(x) == 1:
            return trail[trail.index(x):]
        for t in trail:
            state[t] = 2
    return None


def glue_functions(w: Window, fs: Sequence[Mapping[int, int]]) -> ParentForest:
    """Glue partial parent maps ``f_0, f_1, ...`` into one forest.

    Each vertex takes its step from the highest layer whose domain holds it,
    ``f(x) = f_{n(x)}(x)``.  A step may also land on a boundary vertex, which
    counts as an escape to infinity.

    Raises:
        CyclicInput: some ``f_i`` has a directed cycle.
        Condition4Violated: ``f_i(x)`` lies in no later domain and is not on
            the boundary.
    """
    fs = [dict(fi) for fi in fs]
    for i, fi in enumerate(fs):
        for x, y in fi.items():
            if w.edge_between(x, y) is None:
                raise WindowError(f"f_{i} pair ({x}, {y}) is not an edge")
        cyc = _functional_cycle(fi)
        if cyc:
            raise CyclicInput(i, cyc)
    last: dict[int, int] = {}
    for i, fi in enumerate(fs):
        for x in fi:
            last[x] = i
    for i, fi in enumerate(fs):
        for x in sorted(fi):
            y = fi[x]
            if not (w.boundary[y] or last.get(y, -1) >= i):
                raise Condition4Violated(x, i)
    parent = {x: fs[n][x] for x, n in last.items()}
    f = from_parent_map(w, parent, last)
    cyc = _functional_cycle(parent)
    if cyc:
        raise CyclicInput(-1, cyc)
    return f


# layered nets -------------------------------------------------------------


@dataclass(frozen=True)
class LayeredNets:
    """``sets[n]`` is ``A_n`` (``A_0`` = all vertices); ``radii[n]`` is ``r_n``."""

    sets: tuple
    radii: tuple
    c: float | None = None

    def to_json(self):
        return {"sets": [list(s) for s in self.sets], "radii": list(self.radii)}


def _ball(w: Window, x: int, r: int) -> list:
    dist = {x: 0}
    q = deque([x])
    while q:
        u = q.popleft()
        if dist[u] == r:
            continue
        for v in w.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return list(dist)


def greedy_net(w: Window, r: int, candidates: Iterable[int]) -> list:
    """Maximal set in ascending id with pairwise distance ``> 2r``."""
    blocked = set()
    out = []
    for x in sorted(candidates):
        if x in blocked:
            continue
        out.append(x)
        blocked.update(_ball(w, x, 2 * r))
    return out


def layered_nets(w: Window, c: float | None = None, radii: Sequence[int] | None = None,
                 max_levels: int = 64) -> LayeredNets:
    """Separated nets ``A_n`` with disjoint ``r_n``-balls, ``r_n = 2^n`` by default.

    Levels stop once every component holds at most one net point.  The nets
    are maximal over interior vertices and are not required to be nested.
    """
    interior = w.interior()
    sets = [tuple(range(w.n))]
    rs = [1]
    if not interior:
        return LayeredNets(tuple(sets), tuple(rs), c)
    comp_of = {}
    for i, comp in enumerate(components(w)):
        for v in comp:
            comp_of[v] = i
    n = 1
    while n <= max_levels:
        if radii is not None:
            if n - 1 >= len(radii):
                break
            r = int(radii[n - 1])
            if r <= rs[-1] and n > 1:
                raise ValueError("radii must be strictly increasing")
        else:
            r = 2 ** n
        a = greedy_net(w, r, interior)
        sets.append(tuple(a))
        rs.append(r)
        per = {}
        for x in a:
            per[comp_of[x]] = per.get(comp_of[x], 0) + 1
        if all(k <= 1 for k in per.values()):
            break
        n += 1
    return LayeredNets(tuple(sets), tuple(rs), c)


def net_violations(w: Window, nets: LayeredNets) -> list:
    bad = []
    interior = w.interior()
    for n in range(1, len(nets.sets)):
        a = nets.sets[n]
        r = nets.radii[n]
        dist = bfs_dist(w, a)
        for x in a:
            d = bfs_dist(w, [x])
            for y in a:
                if y != x and 0 <= d[y] <= 2 * r:
                    bad.append(f"A_{n}: d({x},{y}) = {d[y]} <= {2 * r}")
        for v in interior:
            if dist[v] < 0 or dist[v] > 2 * r:
                comp_has = any(bfs_dist(w, [v])[x] >= 0 for x in a)
                if comp_has and dist[v] > 2 * r:
                    bad.append(f"A_{n} not maximal: {v} addable")
    return bad


def _step_toward(w: Window, dist: list, x: int) -> int:
    """Least-id neighbour one step closer; follows the lexicographically least geodesic."""
    for y in w.neighbors(x):
        if dist[y] == dist[x] - 1:
            return y
    raise AssertionError("no closer neighbour")


def layered_subforest(w: Window, nets: LayeredNets) -> ParentForest:
    """Forest from the layered nets via lexicographically least geodesics.

    Layer ``n`` sends each point of ``A_n`` along its least shortest path to
    ``A_{n+1}``; the top layer routes to the boundary.  A path stops as soon
    as it reaches a boundary vertex.  Per-layer maximum path lengths are
    stored in ``stats["path_len"]`` and their bounds ``2 r_{n+1}`` in
    ``stats["bound"]``.

    Raises:
        NoEscape: a boundary-reaching component cannot route its top net
            to the boundary.
    """
    top = len(nets.sets) - 1
    bset = w.boundary_set()
    fs = []
    path_len = []
    for n in range(top + 1):
        target = nets.sets[n + 1] if n < top else sorted(bset)
        dist = bfs_dist(w, target)
        fn: dict[int, int] = {}
        longest = 0
        for x in nets.sets[n]:
            if w.boundary[x]:
                continue
            if dist[x] < 0:
                if n == top and any(w.boundary[v] for v in _component_of(w, x)):
                    raise NoEscape(min(_component_of(w, x)))
                continue
            longest = max(longest, dist[x])
            cur = x
            while dist[cur] > 0 and not w.boundary[cur]:
                if cur in fn:
                    break
                nxt = _step_toward(w, dist, cur)
                fn[cur] = nxt
                cur = nxt
        fs.append(fn)
        path_len.append(longest)
    f = glue_functions(w, fs)
    bound = [2 * nets.radii[n + 1] for n in range(top)] + [None]
    stats = {"path_len": path_len, "bound": bound, "levels": top + 1,
             "domain_sizes": [len(fi) for fi in fs]}
    return ParentForest(f.parent, f.parent_edge, f.roots, f.layer, stats)


def _component_of(w: Window, x: int) -> list:
    d = bfs_dist(w, [x])
    return [v for v in range(w.n) if d[v] >= 0]


# extension ----------------------------------------------------------------


def extend_subforest(w: Window, a: Iterable[int], fa: ParentForest) -> ParentForest:
    """Extend a forest on ``a`` by BFS steps toward ``a``.

    Every vertex outside ``a`` points to its least-id neighbour strictly
    closer to ``a``; the result's back-orbits are finite.

    Raises:
        AMissesComponent: some component contains no vertex of ``a``.
    """
    aset = set(a)
    for comp in components(w):
        if not aset.intersection(comp):
            raise AMissesComponent(comp[0])
    dist = bfs_dist(w, aset)
    parent = {x: y for x, y in fa.parent.items() if x in aset}
    pe = {x: fa.parent_edge[x] for x in parent}
    layer = {x: fa.layer.get(x, 0) for x in parent}
    for x in range(w.n):
        if x in aset:
            continue
        best = None
        for e in sorted(w.incident(x), key=lambda e: (w.other(e, x), e)):
            y = w.other(e, x)
            if dist[y] == dist[x] - 1:
                best = (y, e)
                break
        parent[x], pe[x] = best
        layer[x] = 0
    roots = tuple(v for v in range(w.n) if v not in parent)
    return ParentForest(parent, pe, roots, layer)


def bfs_forest(w: Window, roots: Iterable[int]) -> ParentForest:
    """BFS forest toward ``roots`` (a convenience wrapper)."""
    rs = sorted(set(roots))
    return extend_subforest(w, rs, ParentForest({}, {}, tuple(rs), {}))


# obstruction -----------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    ok: bool
    two_ended: tuple
    labels: dict

    def to_json(self):
        return {"ok": self.ok, "two_ended": list(self.two_ended),
                "labels": {str(k): v for k, v in self.labels.items()}}


def component_center(w: Window, comp: Sequence[int]):
    """Interior vertex farthest from the boundary (least id on ties)."""
    db = bfs_dist(w, [v for v in comp if w.boundary[v]])
    best = None
    for v in comp:
        if w.boundary[v]:
            continue
        if best is None or db[v] > db[best]:
            best = v
    return best


def detect_obstruction(w: Window) -> ObstructionReport:
    """Report components whose end count looks like two."""
    labels = {}
    two = []
    for comp in components(w):
        if not any(w.boundary[v] for v in comp):
            labels[comp[0]] = "finite"
            continue
        c = component_center(w, comp)
        if c is None:
            labels[comp[0]] = "rim"
            continue
        lab = classify_ends(w, c).label
        labels[comp[0]] = lab
        if lab == "two":
            two.append(comp[0])
    return ObstructionReport(not two, tuple(two), labels)


def one_ended_subforest(w: Window, nets: LayeredNets | None = None) -> ParentForest:
    """Layered one-ended forest, refused on two-ended components.

    Raises:
        TwoEndedObstruction: some component classifies as two-ended.
    """
    rep = detect_obstruction(w)
    if not rep.ok:
        raise TwoEndedObstruction(rep.two_ended)
    return layered_subforest(w, nets if nets is not None else layered_nets(w))


# line merging -----------------------------------------------------------------


def _line_order(w: Window, t_edges: set, comp: list) -> list:
    deg = {v: 0 for v in comp}
    adj: dict[int, list] = {v: [] for v in comp}
    for e in t_edges:
        u, v = w.edges[e]
        if u in deg:
            deg[u] += 1
            deg[v] += 1
            adj[u].append((v, e))
            adj[v].append((u, e))
    ends = sorted(v for v in comp if deg[v] <= 1)
    if any(d > 2 for d in deg.values()) or len(ends) != (2 if len(comp) > 1 else 1):
        raise NotLineForest(f"t is not a single line on component {comp[0]}")
    order = [ends[0]]
    prev = None
    while len(order) < len(comp):
        x = order[-1]
        nxt = [y for y, _ in adj[x] if y != prev]
        if not nxt:
            raise NotLineForest(f"t does not span component {comp[0]}")
        prev = x
        order.append(nxt[0])
    return order


def _merge_round(w: Window, line: list, pos: dict):
    """One section step: returns the removed D intervals and round stats."""
    k = len(line)
    inner = max(k - 2, 0)
    members = set(line)
    cand = []
    for e, (u, v) in w.edges.items():
        if u in members and v in members:
            a, b = sorted((pos[u], pos[v]))
            if b - a >= 2:
                cand.append((e, a, b))
    if not cand or inner == 0:
        return None
    maxlen = np.zeros(k, dtype=np.int64)
    for e, a, b in cand:
        L = b - a - 1
        maxlen[a] = max(maxlen[a], L)
        maxlen[b] = max(maxlen[b], L)
    keys = []
    for e, a, b in cand:
        n_e = int(maxlen[a + 1:b].max())
        keys.append(max(b - a - 1, n_e))
    cover_at = {}
    for N in sorted(set(keys)):
        mark = np.zeros(k, dtype=bool)
        for (e, a, b), key in zip(cand, keys):
            if key <= N:
                mark[a + 1:b] = True
        cover_at[N] = int(mark.sum())
        if 4 * cover_at[N] >= 3 * inner:
            break
    N = max(cover_at)
    gN = [(e, a, b) for (e, a, b), key in zip(cand, keys) if key <= N]
    # intersection graph: overlapping open real intervals
    gN.sort(key=lambda t: (t[1], t[2], t[0]))
    m = len(gN)
    adj = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if gN[j][1] >= gN[i][2]:
                break
            adj[i].append(j)
            adj[j].append(i)
    colors = greedy_coloring(adj, max((len(a) for a in adj), default=0))
    alive = set(range(m))
    for c in range(max(colors, default=-1) + 1):
        cover = np.zeros(k, dtype=np.int64)
        for i in alive:
            cover[gN[i][1] + 1:gN[i][2]] += 1
        drop = []
        for i in sorted(alive):
            if colors[i] != c:
                continue
            a, b = gN[i][1], gN[i][2]
            if np.all(cover[a + 1:b] >= 2):
                drop.append(i)
        alive.difference_update(drop)
    keep = sorted(alive)
    sub = [[keep.index(j) for j in adj[i] if j in alive] for i in keep]
    max_deg = max((len(a) for a in sub), default=0)
    col2 = greedy_coloring(sub, max(2, max_deg))
    best = None
    for c in sorted(set(col2)):
        mark = np.zeros(k, dtype=bool)
        for idx, i in enumerate(keep):
            if col2[idx] == c:
                mark[gN[i][1] + 1:gN[i][2]] = True
        size = int(mark.sum())
        if best is None or size > best[0]:
            best = (size, c)
    chosen = [gN[i] for idx, i in enumerate(keep) if col2[idx] == best[1]]
    stats = {"N": N, "line": k, "covered": cover_at[N], "removed": best[0],
             "reduced_max_degree": max_deg}
    return chosen, stats


def merge_lines(w: Window, t) -> ParentForest:
    """Merge a spanning line forest into a boundary-rooted forest.

    ``t`` is a window subgraph (or edge-id set) whose restriction to every
    component of ``w`` is a single path with boundary extremities.  Each
    round picks edges of ``w`` spanning short ``t``-segments, thins them to
    a colour class with pairwise disjoint spans, and deletes the spanned
    vertices; the survivors form the next line.  Deleted vertices point
    along the current line toward the least-id end of their segment.

    Raises:
        NotOneEnded: some component does not classify as one-ended.
        NotLineForest: ``t`` is not a spanning line per component.
    """
    t_edges = set(t.edges) if isinstance(t, Window) else set(t)
    if any(e not in w.edges for e in t_edges):
        raise NotLineForest("t uses edges outside the window")
    parent: dict[int, int] = {}
    pe: dict[int, int] = {}
    layer: dict[int, int] = {}
    rounds = []
    for comp in components(w):
        if len(comp) == 1:
            continue
        c = component_center(w, comp)
        lab = classify_ends(w, c).label if c is not None else "rim"
        if lab != "one":
            raise NotOneEnded(f"component {comp[0]} classifies as {lab}")
        order = _line_order(w, t_edges, comp)
        if not (w.boundary[order[0]] and w.boundary[order[-1]]):
            raise NotLineForest(f"line extremities of component {comp[0]} are not boundary")
        line = order
        line_edges = []
        for x, y in zip(order, order[1:]):
            es = [e for e in t_edges if set(w.edges[e]) == {x, y}]
            line_edges.append(min(es))
        level = 0
        while True:
            pos = {v: i for i, v in enumerate(line)}
            res = _merge_round(w, line, pos)
            if res is None or not res[0]:
                break
            chosen, st = res
            rounds.append(st)
            gone = set()
            seg_for = {}
            for e, a, b in chosen:
                s = min(line[a], line[b])
                for i in range(a + 1, b):
                    gone.add(line[i])
                    seg_for[line[i]] = (a, b, pos[s])
            for x in gone:
                a, b, sp = seg_for[x]
                i = pos[x]
                j = i - 1 if sp < i else i + 1
                parent[x] = line[j]
                pe[x] = line_edges[min(i, j)]
                layer[x] = level
            new_line, new_edges = [line[0]], []
            span = {a: e for e, a, b in chosen}
            i = 0
            while i < len(line) - 1:
                if i in span:
                    e = span[i]
                    b = next(bb for ee, aa, bb in chosen if aa == i)
                    new_edges.append(e)
                    i = b
                else:
                    new_edges.append(line_edges[i])
                    i += 1
                new_line.append(line[i])
            line, line_edges = new_line, new_edges
            level += 1
        root = min(line[0], line[-1])
        rpos = 0 if line[0] == root else len(line) - 1
        for i, x in enumerate(line):
            if i == rpos:
                continue
            j = i - 1 if i > rpos else i + 1
            parent[x] = line[j]
            pe[x] = line_edges[min(i, j)]
            layer[x] = level
    roots = tuple(v for v in range(w.n) if v not in parent)
    return ParentForest(parent, pe, roots, layer, {"rounds": rounds})


# random weights --------------------------------------------------------------


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[max(a, b)] = min(a, b)
        return True


def random_weight_forest(w: Window, seed: int, wired: bool = True) -> ParentForest:
    """Minimal spanning forest under i.i.d. uniform edge weights.

    With ``wired`` all boundary vertices are glued into one point before
    Kruskal runs, so each tree carries exactly one boundary vertex.  Trees
    are oriented toward their least-id boundary vertex (least id overall in
    finite components).
    """
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    ids = sorted(w.edges)
    weights = rng.random(len(ids))
    order = sorted(range(len(ids)), key=lambda i: (weights[i], ids[i]))
    dsu = _DSU(w.n + 1)
    sink = w.n
    if wired:
        for v in range(w.n):
            if w.boundary[v]:
                dsu.union(v, sink)
    kept = []
    for i in order:
        u, v = w.edges[ids[i]]
        if dsu.union(u, v):
            kept.append(ids[i])
    h = w.with_edges(kept)
    roots = []
    for comp in components(h):
        bs = [v for v in comp if w.boundary[v]]
        roots.append(bs[0] if bs else comp[0])
    f = extend_subforest(h, roots, ParentForest({}, {}, tuple(roots), {}))
    return ParentForest(f.parent, f.parent_edge, f.roots, f.layer,
                        {"weights": {ids[i]: float(weights[i]) for i in range(len(ids))}})

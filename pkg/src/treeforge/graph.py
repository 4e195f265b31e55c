"""Finite windows onto locally finite graphs.

A :class:`Window` is a finite multigraph with dense vertex ids ``0..n-1``,
stable edge ids, and a per-vertex boundary flag marking vertices where the
underlying infinite graph continues past the window.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CenterOnBoundary, DegreeBoundViolated, WindowError
from .gf2 import rank_of_sets


class Window:
    """Immutable finite multigraph with boundary flags.

    Args:
        n: number of vertices; ids are ``0..n-1``.
        edges: either a sequence of ``(u, v)`` pairs (ids assigned by
            position) or a mapping ``edge_id -> (u, v)``.
        boundary: iterable of boundary vertex ids, or a length-``n`` sequence
            of booleans.
        pos: optional ``n x 2`` coordinates.
        rotation: optional rotation system, ``rotation[v]`` listing the edge
            ids around ``v`` in counter-clockwise order.
    """

    __slots__ = ("n", "edges", "boundary", "pos", "rotation", "_adj", "_inc")

    def __init__(self, n: int, edges=(), boundary=(), pos=None, rotation=None):
        if isinstance(edges, Mapping):
            emap = {int(k): (int(u), int(v)) for k, (u, v) in sorted(edges.items())}
        else:
            emap = {i: (int(u), int(v)) for i, (u, v) in enumerate(edges)}
        for eid, (u, v) in emap.items():
            if u == v:
                raise WindowError(f"self-loop at vertex {u} (edge {eid})")
            if not (0 <= u < n and 0 <= v < n):
                raise WindowError(f"edge {eid} references a vertex outside 0..{n - 1}")
        b = list(boundary)
        if len(b) == n and all(isinstance(x, bool) for x in b) and n > 0:
            flags = tuple(b)
        else:
            s = set(int(x) for x in b)
            if any(not 0 <= x < n for x in s):
                raise WindowError("boundary vertex id out of range")
            flags = tuple(i in s for i in range(n))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", emap)
        object.__setattr__(self, "boundary", flags)
        object.__setattr__(self, "pos", None if pos is None else tuple((float(x), float(y)) for x, y in pos))
        if rotation is not None:
            rotation = tuple(tuple(int(e) for e in r) for r in rotation)
        object.__setattr__(self, "rotation", rotation)
        adj = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        for eid, (u, v) in emap.items():
            adj[u].append(v)
            adj[v].append(u)
            inc[u].append(eid)
            inc[v].append(eid)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_inc", tuple(tuple(i) for i in inc))

    def __setattr__(self, key, value):
        raise AttributeError("Window is immutable")

    def __repr__(self):
        return f"Window(n={self.n}, m={len(self.edges)}, boundary={sum(self.boundary)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple:
        """Sorted neighbour list (with multiplicity for parallel edges)."""
        return self._adj[v]

    def incident(self, v: int) -> tuple:
        return self._inc[v]

    def degree(self, v: int) -> int:
        return len(self._inc[v])

    def other(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        return w if u == v else u

    def boundary_set(self) -> set:
        return {i for i, b in enumerate(self.boundary) if b}

    def interior(self) -> list:
        return [i for i, b in enumerate(self.boundary) if not b]

    def edge_between(self, u: int, v: int):
        """Least edge id joining ``u`` and ``v``, or None."""
        best = None
        for e in self._inc[u]:
            if self.other(e, u) == v and (best is None or e < best):
                best = e
        return best

    def with_edges(self, keep: Iterable[int]) -> "Window":
        """Spanning subgraph keeping only the listed edge ids."""
        ks = set(keep)
        rot = None
        if self.rotation is not None:
            rot = [tuple(e for e in r if e in ks) for r in self.rotation]
        return Window(self.n, {e: self.edges[e] for e in sorted(ks)}, self.boundary, self.pos, rot)

    def with_boundary(self, boundary) -> "Window":
        return Window(self.n, self.edges, boundary, self.pos, self.rotation)

    def induced(self, verts: Iterable[int]):
        """Induced subgraph, relabelled densely; returns ``(window, old_ids)``."""
        old = sorted(set(verts))
        new = {v: i for i, v in enumerate(old)}
        es = {}
        for eid, (u, v) in self.edges.items():
            if u in new and v in new:
                es[eid] = (new[u], new[v])
        pos = None if self.pos is None else [self.pos[v] for v in old]
        return Window(len(old), es, [self.boundary[v] for v in old], pos), old

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        verts = []
        for i in range(self.n):
            d = {"id": i, "boundary": self.boundary[i]}
            if self.pos is not None:
                d["pos"] = [self.pos[i][0], self.pos[i][1]]
            verts.append(d)
        out = {
            "vertices": verts,
            "edges": [{"id": e, "u": u, "v": v} for e, (u, v) in self.edges.items()],
        }
        if self.rotation is not None:
            out["rotation"] = [list(r) for r in self.rotation]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Window":
        try:
            verts = sorted(data["vertices"], key=lambda d: d["id"])
            n = len(verts)
            if [d["id"] for d in verts] != list(range(n)):
                raise WindowError("vertex ids must be dense 0..n-1")
            edges = {}
            for d in data["edges"]:
                eid = int(d["id"])
                if eid in edges:
                    raise WindowError(f"duplicate edge id {eid}")
                edges[eid] = (int(d["u"]), int(d["v"]))
            boundary = [bool(d.get("boundary", False)) for d in verts]
            pos = None
            if n and all("pos" in d for d in verts):
                pos = [tuple(d["pos"]) for d in verts]
        except (KeyError, TypeError, ValueError) as exc:
            raise WindowError(f"malformed window JSON: {exc!r}") from exc
        return cls(n, edges, boundary, pos, data.get("rotation"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self, name: str = "window", directed_parent: Mapping[int, int] | None = None) -> str:
        lines = [("digraph " if directed_parent else "graph ") + name + " {"]
        for i in range(self.n):
            attrs = ['shape=box' if self.boundary[i] else 'shape=circle']
            if self.pos is not None:
                attrs.append(f'pos="{self.pos[i][0]:.9g},{self.pos[i][1]:.9g}!"')
            lines.append(f"  {i} [{', '.join(attrs)}];")
        if directed_parent:
            for x, y in sorted(directed_parent.items()):
                lines.append(f"  {x} -> {y};")
        else:
            for e, (u, v) in self.edges.items():
                lines.append(f'  {u} -- {v} [label="{e}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# traversal ---------------------------------------------------------------


def bfs_dist(w: Window, sources: Iterable[int], allowed=None) -> list:
    """Multi-source BFS distances (``-1`` for unreachable)."""
    dist = [-1] * w.n
    q = deque()
    for s in sorted(set(sources)):
        if allowed is None or s in allowed:
            dist[s] = 0
            q.append(s)
    while q:
        x = q.popleft()
        for y in w.neighbors(x):
            if dist[y] < 0 and (allowed is None or y in allowed):
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def components(w: Window, allowed=None) -> list:
    """Connected components ordered by least vertex id.

    Args:
        w: the window.
        allowed: optional vertex subset; components of the induced subgraph.
    """
    seen = [False] * w.n
    out = []
    verts = range(w.n) if allowed is None else sorted(allowed)
    allow = None if allowed is None else set(allowed)
    for s in verts:
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in w.neighbors(x):
                if not seen[y] and (allow is None or y in allow):
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def component_index(w: Window) -> list:
    idx = [0] * w.n
    for i, c in enumerate(components(w)):
        for v in c:
            idx[v] = i
    return idx


def is_forest(w: Window) -> bool:
    return w.m == w.n - len(components(w))


def cycle_space_rank(w: Window) -> int:
    """First Betti number ``|E| - |V| + #components``."""
    return w.m - w.n + len(components(w))


def fundamental_cycles(w: Window) -> list:
    """Fundamental cycles (edge-id sets) of a BFS spanning forest.

    Used as an independent route to the cycle-space rank.
    """
    parent_edge = [None] * w.n
    depth = [-1] * w.n
    parent = [-1] * w.n
    tree = set()
    for comp in components(w):
        r = comp[0]
        depth[r] = 0
        q = deque([r])
        while q:
            x = q.popleft()
            for e in sorted(w.incident(x)):
                y = w.other(e, x)
                if depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    parent_edge[y] = e
                    tree.add(e)
                    q.append(y)
    cycles = []
    for e, (u, v) in w.edges.items():
        if e in tree:
            continue
        cyc = {e}
        a, b = u, v
        while a != b:
            if depth[a] >= depth[b]:
                cyc ^= {parent_edge[a]}
                a = parent[a]
            else:
                cyc ^= {parent_edge[b]}
                b = parent[b]
        cycles.append(sorted(cyc))
    return cycles


def cycle_rank_gf2(cycles: Iterable[Iterable[int]]) -> int:
    """GF(2) rank of a collection of edge-id sets."""
    return rank_of_sets(cycles)


def is_simple_cycle(w: Window, cyc: Iterable[int]) -> bool:
    """True when the edge set forms one closed walk with all degrees 2."""
    es = list(cyc)
    if not es or len(set(es)) != len(es):
        return False
    deg: dict[int, int] = {}
    for e in es:
        if e not in w.edges:
            return False
        for x in w.edges[e]:
            deg[x] = deg.get(x, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    # connected?
    adj: dict[int, list] = {}
    for e in es:
        u, v = w.edges[e]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


# ends -------------------------------------------------------------------


@dataclass(frozen=True)
class EndClass:
    """End label of the component containing ``center``.

    ``counts[k-1]`` is the number of boundary-touching components left
    after deleting the closed ball of radius ``k``.
    """

    label: str
    counts: tuple = ()
    radius: int = 0

    def to_json(self):
        return {"label": self.label, "counts": list(self.counts), "radius": self.radius}


def window_radius(w: Window, center: int) -> int:
    """Distance from ``center`` to the nearest boundary vertex (-1 if none)."""
    dist = bfs_dist(w, [center])
    ds = [dist[v] for v in range(w.n) if w.boundary[v] and dist[v] >= 0]
    return min(ds) if ds else -1


def _label(c: int) -> str:
    return {0: "finite", 1: "one", 2: "two"}.get(c, "many")


def classify_ends(w: Window, center: int) -> EndClass:
    """Desk-scale end count of the component of ``center``.

    For ``k = 1..k_max`` with ``k_max = max(1, radius // 3)`` the ball
    ``B_k(center)`` is deleted and the boundary-touching components of the
    rest of the component are counted.  The count must agree on the last two
    radii, else the label is ``many``.
    """
    if w.boundary[center]:
        raise CenterOnBoundary(f"center {center} is a boundary vertex")
    dist = bfs_dist(w, [center])
    comp = {v for v in range(w.n) if dist[v] >= 0}
    if not any(w.boundary[v] for v in comp):
        return EndClass("finite", (), -1)
    radius = min(dist[v] for v in comp if w.boundary[v])
    k_max = max(1, radius // 3)
    counts = []
    for k in range(1, k_max + 1):
        rest = {v for v in comp if dist[v] > k}
        c = 0
        for part in components(w, rest):
            if any(w.boundary[v] for v in part):
                c += 1
        counts.append(c)
    if len(counts) >= 2 and counts[-1] != counts[-2]:
        return EndClass("many", tuple(counts), radius)
    return EndClass(_label(counts[-1]) if counts[-1] else "finite", tuple(counts), radius)


# coloring ---------------------------------------------------------------


def greedy_coloring(w, degree_bound: int) -> list:
    """Proper colouring in ascending vertex order with at most d+1 colours.

    Args:
        w: a Window, or an adjacency list ``adj[v] -> iterable of neighbours``.
        degree_bound: the promised maximum degree ``d``.
    """
    adj = [w.neighbors(v) for v in range(w.n)] if isinstance(w, Window) else [sorted(set(a)) for a in w]
    for v, a in enumerate(adj):
        if len(set(a)) > degree_bound:
            raise DegreeBoundViolated(f"vertex {v} has degree {len(set(a))} > {degree_bound}")
    color = [-1] * len(adj)
    for v in range(len(adj)):
        used = {color[u] for u in adj[v] if color[u] >= 0}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color

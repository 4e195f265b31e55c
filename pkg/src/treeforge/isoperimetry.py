"""Vertex (and edge) isoperimetric constants and hyperfiniteness certificates.

Ratios are ``|∂A| / |A|`` where ``∂A`` is the set of vertices outside ``A``
adjacent to ``A``.  A set is admissible when the components it induces count
as finite for the window: see :func:`finite_ok`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import BudgetExceeded, TooLarge
from .graph import Window, bfs_dist, components
from .subforest import ParentForest

EXACT_LIMIT = 22


@dataclass(frozen=True)
class IsoCertificate:
    witness: tuple
    boundary: tuple
    ratio: Fraction
    finite: bool
    method: str
    edge_variant: bool = False

    def to_json(self):
        return {"witness": list(self.witness), "boundary": list(self.boundary),
                "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
                "ratio_float": float(self.ratio), "finite": self.finite,
                "method": self.method, "edge_variant": self.edge_variant}


def vertex_boundary(w: Window, a: Iterable[int]) -> set:
    s = set(a)
    return {y for x in s for y in w.neighbors(x) if y not in s}


def edge_boundary(w: Window, a: Iterable[int]) -> list:
    s = set(a)
    return [e for e, (u, v) in w.edges.items() if (u in s) != (v in s)]


def default_cap(w: Window) -> int:
    return max(1, math.isqrt(w.n))


def finite_ok(w: Window, a: Iterable[int], mode: str = "either", cap: int | None = None) -> bool:
    """Whether every component of ``w`` restricted to ``a`` counts as finite.

    Modes: ``boundary`` (no boundary vertex), ``cap`` (size at most ``cap``),
    ``either`` (one of the two).
    """
    cap = default_cap(w) if cap is None else cap
    for comp in components(w, set(a)):
        touches = any(w.boundary[v] for v in comp)
        small = len(comp) <= cap
        if mode == "boundary" and touches:
            return False
        if mode == "cap" and not small:
            return False
        if mode == "either" and touches and not small:
            return False
    return True


def _ratio(w, a, edge_variant):
    num = len(edge_boundary(w, a)) if edge_variant else len(vertex_boundary(w, a))
    return Fraction(num, len(a))


def iso_constant_exact(w: Window, finite_mode: str = "either", cap: int | None = None,
                       edge_variant: bool = False) -> IsoCertificate:
    """Exact minimum ratio by exhaustive search over vertex subsets.

    ``A`` ranges over the nonempty proper subsets of the vertex set (all of
    it for a one-vertex window), so a finite window does not trivially
    score 0 by taking everything.

    Raises:
        TooLarge: more than 22 vertices.
    """
    n = w.n
    if n > EXACT_LIMIT:
        raise TooLarge(f"{n} vertices exceeds the exhaustive budget of {EXACT_LIMIT}")
    if n == 0:
        return IsoCertificate((), (), Fraction(0), True, "exhaustive", edge_variant)
    if n == 1:
        return IsoCertificate((0,), (), Fraction(0), True, "exhaustive", edge_variant)
    size = 1 << n
    adjmask = [0] * n
    for u, v in w.edges.values():
        adjmask[u] |= 1 << v
        adjmask[v] |= 1 << u
    nb = np.zeros(size, dtype=np.int64)
    pc = np.zeros(size, dtype=np.int64)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        nb[lo:hi] = nb[0:lo] | adjmask[i]
        pc[lo:hi] = pc[0:lo] + 1
    masks = np.arange(size, dtype=np.int64)
    if edge_variant:
        deg = [w.degree(v) for v in range(n)]
        mult = np.zeros((n, n), dtype=np.int64)
        for u, v in w.edges.values():
            mult[u, v] += 1
            mult[v, u] += 1
        num = np.zeros(size, dtype=np.int64)
        for i in range(n):
            lo = 1 << i
            # s[m] = number of edges from i into mask m (m over bits < i)
            s = np.zeros(lo, dtype=np.int64)
            for j in range(i):
                s[1 << j:1 << (j + 1)] = s[0:1 << j] + mult[i, j]
            num[lo:2 * lo] = num[0:lo] + deg[i] - 2 * s
    else:
        outside = nb & ~masks
        num = np.zeros(size, dtype=np.int64)
        bits = outside.copy()
        while True:
            nz = bits != 0
            if not nz.any():
                break
            num += nz
            bits &= bits - 1
    valid = np.ones(size, dtype=bool)
    valid[0] = False
    valid[size - 1] = False
    bmask = sum(1 << v for v in range(n) if w.boundary[v])
    ratio = np.where(valid, num / np.maximum(pc, 1), np.inf)
    order = np.argsort(ratio, kind="stable")
    best = None
    for idx in order:
        r = ratio[idx]
        if not np.isfinite(r):
            break
        if best is not None and r > float(best[0]) + 1e-12:
            break
        m = int(idx)
        a = [v for v in range(n) if m >> v & 1]
        if (m & bmask) and not finite_ok(w, a, finite_mode, cap):
            continue
        fr = Fraction(int(num[m]), int(pc[m]))
        if best is None or fr < best[0] or (fr == best[0] and m < best[1]):
            best = (fr, m)
    if best is None:
        raise TooLarge("no admissible subset")
    a = tuple(v for v in range(n) if best[1] >> v & 1)
    bd = tuple(edge_boundary(w, a)) if edge_variant else tuple(sorted(vertex_boundary(w, a)))
    return IsoCertificate(a, bd, best[0], True, "exhaustive", edge_variant)


class _Grower:
    """Incremental vertex/edge boundary bookkeeping for a growing set."""

    def __init__(self, w: Window):
        self.w = w
        self.inA = np.zeros(w.n, dtype=bool)
        self.cnt = np.zeros(w.n, dtype=np.int64)
        self.size = 0
        self.vb = 0
        self.eb = 0

    def add(self, v):
        w = self.w
        if self.cnt[v] > 0:
            self.vb -= 1
        self.inA[v] = True
        self.size += 1
        inside = 0
        for u in w.neighbors(v):
            if self.inA[u] and u != v:
                inside += 1
        self.eb += w.degree(v) - 2 * inside
        for u in set(w.neighbors(v)):
            if not self.inA[u]:
                if self.cnt[u] == 0:
                    self.vb += 1
            self.cnt[u] += sum(1 for x in w.neighbors(v) if x == u)

    def remove(self, v):
        w = self.w
        self.inA[v] = False
        self.size -= 1
        inside = sum(1 for u in w.neighbors(v) if self.inA[u])
        self.eb -= w.degree(v) - 2 * inside
        for u in set(w.neighbors(v)):
            k = sum(1 for x in w.neighbors(v) if x == u)
            self.cnt[u] -= k
            if not self.inA[u] and self.cnt[u] == 0:
                self.vb -= 1
        if self.cnt[v] > 0:
            self.vb += 1

    def value(self, edge_variant):
        return (self.eb if edge_variant else self.vb), self.size


def _bfs_order(w: Window, s: int, allowed=None, limit=None):
    seen = {s}
    order = [s]
    q = deque([s])
    while q and (limit is None or len(order) < limit):
        x = q.popleft()
        for y in w.neighbors(x):
            if y not in seen and (allowed is None or y in allowed):
                seen.add(y)
                order.append(y)
                q.append(y)
                if limit is not None and len(order) >= limit:
                    break
    return order


def iso_constant_greedy(w: Window, restarts: int = 8, seed: int = 0, finite_mode: str = "either",
                        cap: int | None = None, edge_variant: bool = False,
                        max_size: int | None = None, local_steps: int = 50) -> IsoCertificate:
    """Upper bound on the isoperimetric constant by BFS-ball growth plus local moves.

    Seeds are the vertex farthest from the boundary (or vertex 0) plus
    ``restarts`` random vertices.  Sets avoid boundary vertices unless the
    finiteness mode tolerates small boundary components.
    """
    n = w.n
    if n == 0:
        return IsoCertificate((), (), Fraction(0), True, "greedy", edge_variant)
    if n == 1:
        return IsoCertificate((0,), (), Fraction(0), True, "greedy", edge_variant)
    cap = default_cap(w) if cap is None else cap
    limit = n - 1 if max_size is None else min(max_size, n - 1)
    if finite_mode == "cap":
        limit = min(limit, cap)
    rng = np.random.default_rng(seed)
    bset = w.boundary_set()
    allowed = None if not bset or finite_mode == "cap" else set(range(n)) - bset
    seeds = []
    if bset:
        d = bfs_dist(w, bset)
        seeds.append(int(np.argmax(d)))
    else:
        seeds.append(0)
    pool = sorted(allowed) if allowed is not None else list(range(n))
    if pool:
        seeds += [int(x) for x in rng.choice(pool, size=min(restarts, len(pool)), replace=False)]
    best = None
    for s in seeds:
        if allowed is not None and s not in allowed:
            continue
        order = _bfs_order(w, s, allowed, limit)
        g = _Grower(w)
        for k, v in enumerate(order):
            g.add(v)
            num, size = g.value(edge_variant)
            fr = Fraction(num, size)
            if best is None or fr < best[0]:
                best = (fr, tuple(order[:k + 1]))
    # local improvement around the best set
    a = set(best[1])
    g = _Grower(w)
    for v in a:
        g.add(v)
    for _ in range(local_steps):
        cur = Fraction(*g.value(edge_variant))
        improved = False
        frontier = sorted({u for x in a for u in w.neighbors(x) if u not in a})
        for v in frontier:
            if (allowed is not None and v not in allowed) or len(a) + 1 > limit:
                continue
            g.add(v)
            fr = Fraction(*g.value(edge_variant))
            if fr < cur:
                a.add(v)
                improved = True
                break
            g.remove(v)
        if not improved:
            for v in sorted(a):
                if len(a) == 1:
                    break
                g.remove(v)
                fr = Fraction(*g.value(edge_variant))
                if fr < cur:
                    a.discard(v)
                    improved = True
                    break
                g.add(v)
        if not improved:
            break
    fr = Fraction(*g.value(edge_variant))
    if fr < best[0] and finite_ok(w, a, finite_mode, cap):
        best = (fr, tuple(sorted(a)))
    wit = tuple(sorted(best[1]))
    bd = tuple(edge_boundary(w, wit)) if edge_variant else tuple(sorted(vertex_boundary(w, wit)))
    return IsoCertificate(wit, bd, best[0], finite_ok(w, wit, finite_mode, cap), "greedy", edge_variant)


def spectral_lower_bound(w: Window, max_fraction: float) -> float | None:
    """Lower bound on ``|∂A|/|A|`` for ``|A| <= max_fraction*|V|`` in a regular window.

    Uses the neighbourhood expansion bound for ``d``-regular graphs,
    ``|N(A)| >= d^2 |A| / (lam^2 + (d^2 - lam^2) a)`` with ``lam`` the largest
    nontrivial eigenvalue in absolute value and ``a = |A|/|V|``.  Returns
    None when the window is not regular.
    """
    degs = {w.degree(v) for v in range(w.n)}
    if len(degs) != 1 or w.n < 2:
        return None
    d = degs.pop()
    m = np.zeros((w.n, w.n))
    for u, v in w.edges.values():
        m[u, v] += 1
        m[v, u] += 1
    ev = np.linalg.eigvalsh(m)
    ev = np.sort(ev)
    lam = max(abs(ev[0]), abs(ev[-2]))
    denom = lam * lam + (d * d - lam * lam) * max_fraction
    return float(d * d / denom - 1.0)


# hyperfinite cover ----------------------------------------------------------


@dataclass
class CoverResult:
    success: bool
    a: tuple
    chunks: list
    boundary: tuple
    certificate: dict = field(default_factory=dict)

    def to_json(self):
        return {"success": self.success, "size": len(self.a), "chunks": len(self.chunks),
                "boundary_size": len(self.boundary), "certificate": self.certificate}


def _best_prefix(w, s, region, limit, eps, finite_mode, cap, bset):
    """Best-ratio BFS prefix from ``s`` inside ``region`` (ratio relative to ``region``)."""
    order = _bfs_order(w, s, region, limit)
    inA = set()
    cnt: dict[int, int] = {}
    vb = 0
    best = None
    touched = False
    for k, v in enumerate(order):
        if cnt.get(v, 0) > 0:
            vb -= 1
        inA.add(v)
        if v in bset:
            touched = True
            if finite_mode == "boundary" or (len(inA) > cap and finite_mode == "either"):
                break
        if finite_mode == "cap" and len(inA) > cap:
            break
        if finite_mode == "either" and touched and len(inA) > cap:
            break
        for u in w.neighbors(v):
            if u in region and u not in inA:
                if cnt.get(u, 0) == 0:
                    vb += 1
                cnt[u] = cnt.get(u, 0) + 1
        r = vb / len(inA)
        if best is None or r < best[0] - 1e-15 or (abs(r - best[0]) <= 1e-15 and k + 1 > len(best[1])):
            best = (r, order[:k + 1])
    return best


def hyperfinite_cover(w: Window, eps: float, max_chunk: int | None = None, finite_mode: str = "either",
                      cap: int | None = None, seed_tries: int = 64) -> CoverResult:
    """Greedy Elek-style cover by pairwise non-adjacent finite chunks.

    Chunks are drawn from the region not yet covered or adjacent to the
    cover.  A chunk is a whole small component of that region, or the BFS
    prefix (at most ``max_chunk`` vertices) with least boundary ratio inside
    the region; it is accepted when that ratio is at most ``eps``, which
    keeps ``|∂A| <= eps |A|`` for the union ``A``.  Succeeds when the region
    empties and ``|A| >= (1 - eps)|V|``; otherwise returns the blocked state.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    n = w.n
    cap = default_cap(w) if cap is None else cap
    max_chunk = max(1, n // 4) if max_chunk is None else max_chunk
    bset = w.boundary_set()
    region = set(range(n))
    covered: set = set()
    chunks = []
    blocked = None
    while region:
        chunk = None
        # whole small components first: zero relative boundary
        for comp in components(w, region):
            if len(comp) <= max_chunk and finite_ok(w, comp, finite_mode, cap):
                chunk = comp
                break
        if chunk is None:
            rs = sorted(region)
            tries = rs if len(rs) <= seed_tries else [rs[int(i)] for i in np.linspace(0, len(rs) - 1, seed_tries)]
            best_seen = None
            for s in tries:
                b = _best_prefix(w, s, region, max_chunk, eps, finite_mode, cap, bset)
                if b is None:
                    continue
                if best_seen is None or b[0] < best_seen[0]:
                    best_seen = b
                if b[0] <= eps:
                    chunk = sorted(b[1])
                    break
            if chunk is None:
                blocked = {"region": len(region), "covered": len(covered),
                           "best_ratio": None if best_seen is None else best_seen[0],
                           "seeds_tried": len(tries), "eps": eps, "max_chunk": max_chunk}
                break
        chunks.append(tuple(chunk))
        covered.update(chunk)
        nb = vertex_boundary(w, chunk)
        region.difference_update(chunk)
        region.difference_update(nb)
    bd = tuple(sorted(vertex_boundary(w, covered)))
    ok = blocked is None and len(covered) >= (1 - eps) * n
    cert = blocked or {}
    if blocked is None and not ok:
        cert = {"reason": "cover too small", "covered": len(covered)}
    return CoverResult(ok, tuple(sorted(covered)), chunks, bd, cert)


def cover_violations(w: Window, res: CoverResult, eps: float, finite_mode: str = "either",
                     cap: int | None = None) -> list:
    """Check finiteness, the boundary budget, and chunk non-adjacency."""
    bad = []
    for i, c in enumerate(res.chunks):
        if not finite_ok(w, c, finite_mode, cap):
            bad.append(f"chunk {i} has an infinite component")
    a = set(res.a)
    if len(vertex_boundary(w, a)) > eps * len(a) + 1e-9:
        bad.append("boundary budget exceeded")
    owner = {}
    for i, c in enumerate(res.chunks):
        for v in c:
            owner[v] = i
    for u, v in w.edges.values():
        if u in owner and v in owner and owner[u] != owner[v]:
            bad.append(f"chunks {owner[u]} and {owner[v]} are adjacent")
            break
    return bad


# small section -------------------------------------------------------------


@dataclass
class SectionResult:
    a: tuple
    pruning: list
    n: int
    paths: dict
    witness: list

    def to_json(self):
        return {"size": len(self.a), "n": self.n, "pruning_sizes": [len(p) for p in self.pruning],
                "max_path": max((len(p) - 1 for p in self.paths.values()), default=0),
                "witness": self.witness}


def small_section(w: Window, t: ParentForest, cross: Iterable[int], eps: float) -> SectionResult:
    """Small complete section from a forest, by leaf pruning plus connector paths.

    ``A_1 = V`` and ``A_{k+1}`` keeps the vertices of ``A_k`` with at least two
    forest neighbours inside ``A_k``, until ``|A_n| < eps |V| / 2``.  Each
    endpoint ``x`` of a cross edge joins the forest path to its nearest
    survivor.  A forest component pruned away before level ``n`` uses its
    last surviving level instead.  Components made only of boundary
    vertices need no cross edge.

    Raises:
        BudgetExceeded: a component is missed by ``cross`` or ``|A| >= eps |V|``.
    """
    tw = t.as_window(w)
    tcomps = components(tw)
    tcomp_of = [0] * w.n
    for i, c in enumerate(tcomps):
        for v in c:
            tcomp_of[v] = i
    cross = sorted(set(cross))
    tset = set(t.parent_edge.values())
    for e in cross:
        if e in tset:
            raise BudgetExceeded(f"cross edge {e} belongs to the forest", {"edge": e})
    hit = set()
    for e in cross:
        u, v = w.edges[e]
        hit.add(tcomp_of[u])
        hit.add(tcomp_of[v])
    for i, c in enumerate(tcomps):
        if i not in hit and any(not w.boundary[v] for v in c):
            raise BudgetExceeded(f"cross misses forest component {c[0]}",
                                 {"missing_component": c[0]})
    levels = [set(range(w.n))]
    level_of = [1] * w.n
    while len(levels[-1]) >= eps * w.n / 2:
        cur = levels[-1]
        nxt = {x for x in cur if sum(1 for y in tw.neighbors(x) if y in cur) >= 2}
        if nxt == cur:
            raise BudgetExceeded("pruning stalled", {"size": len(cur)})
        for x in nxt:
            level_of[x] = len(levels) + 1
        levels.append(nxt)
    n = len(levels)
    an = levels[-1]
    b = sorted({x for e in cross for x in w.edges[e]})
    paths = {}
    for x in b:
        comp = tcomps[tcomp_of[x]]
        top = max(level_of[v] for v in comp)
        target = [v for v in comp if level_of[v] == top]
        dist = bfs_dist(tw, target)
        p = [x]
        while dist[p[-1]] > 0:
            cur = p[-1]
            p.append(min(y for y in tw.neighbors(cur) if dist[y] == dist[cur] - 1))
        paths[x] = p
    aset = set(an)
    for p in paths.values():
        aset.update(p)
    ac = components(w, aset)
    comp_id = {}
    for i, c in enumerate(ac):
        for v in c:
            comp_id[v] = i
    witness = []
    for e in cross:
        u, v = w.edges[e]
        witness.append({"edge": e, "forest_components": [tcomps[tcomp_of[u]][0], tcomps[tcomp_of[v]][0]],
                        "section_component": comp_id[u]})
    res = SectionResult(tuple(sorted(aset)), [tuple(sorted(l)) for l in levels], n, paths, witness)
    if len(aset) >= eps * w.n:
        raise BudgetExceeded(f"|A| = {len(aset)} is not below {eps} |V|",
                             {"size": len(aset), "n": n, "result": res})
    return res

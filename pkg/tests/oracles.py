"""Independent reference computations used by the tests.

Nothing here imports the algorithm under test; each oracle recomputes its
answer from raw edge lists with plain union-find, numpy elimination or
exhaustive enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


class UnionFind:
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
        self.p[a] = b
        return True


def is_spanning_tree(n: int, edge_list) -> bool:
    """True when ``edge_list`` (pairs) is a spanning tree on vertices 0..n-1."""
    if len(edge_list) != n - 1:
        return False
    uf = UnionFind(n)
    return all(uf.union(u, v) for u, v in edge_list)


def count_components(n: int, edge_list) -> int:
    uf = UnionFind(n)
    c = n
    for u, v in edge_list:
        if uf.union(u, v):
            c -= 1
    return c


def gf2_rank(rows, ncols: int) -> int:
    """Rank over GF(2) by dense numpy Gaussian elimination."""
    if not rows:
        return 0
    m = np.zeros((len(rows), ncols), dtype=np.uint8)
    for i, r in enumerate(rows):
        for j in r:
            m[i, j] ^= 1
    rank = 0
    for col in range(ncols):
        piv = np.nonzero(m[rank:, col])[0]
        if len(piv) == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        hits = np.nonzero(m[:, col])[0]
        for h in hits:
            if h != rank:
                m[h] ^= m[rank]
        rank += 1
        if rank == len(rows):
            break
    return rank


def simple_cycle(edge_pairs) -> bool:
    """Endpoint pairs of distinct edges form one simple cycle: degrees 2, connected."""
    if not edge_pairs:
        return False
    deg = {}
    for u, v in edge_pairs:
        if u == v:
            return False
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    verts = sorted(deg)
    idx = {v: i for i, v in enumerate(verts)}
    return count_components(len(verts), [(idx[u], idx[v]) for u, v in edge_pairs]) == 1


def brute_iso(n: int, edge_list) -> Fraction:
    """min |outer vertex boundary| / |A| over nonempty proper subsets."""
    nb = [set() for _ in range(n)]
    for u, v in edge_list:
        nb[u].add(v)
        nb[v].add(u)
    best = None
    for k in range(1, n):
        for a in itertools.combinations(range(n), k):
            s = set(a)
            bd = set().union(*(nb[x] for x in a)) - s
            r = Fraction(len(bd), k)
            if best is None or r < best:
                best = r
    return best


def radial_distance(r: float) -> float:
    """Hyperbolic distance from 0 to radius ``r`` in the Poincaré disk by quadrature."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: 2.0 / (1.0 - t * t), 0.0, r)
    return val


def reduced_betti(cells_by_dim) -> list:
    """Reduced GF(2) Betti numbers from ``cells_by_dim[k] = {id: faces}``."""
    d = len(cells_by_dim) - 1
    counts = [len(c) for c in cells_by_dim]
    ranks = [1 if counts[0] else 0]
    for k in range(1, d + 1):
        rows_idx = {f: i for i, f in enumerate(sorted(cells_by_dim[k - 1]))}
        cols = [[rows_idx[f] for f in fs] for _, fs in sorted(cells_by_dim[k].items())]
        ranks.append(gf2_rank(cols, len(rows_idx)) if cols else 0)
    ranks.append(0)
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(d + 1)]


def hyperbolic_triangle_area_by_angles(a, b, c) -> float:
    """Angle defect of a Poincaré-disk geodesic triangle via hyperboloid tangent vectors."""
    def hyp(z):
        r2 = abs(z) ** 2
        return np.array([(1 + r2), 2 * z.real, 2 * z.imag]) / (1 - r2)

    def mink(x, y):
        return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]

    pts = [hyp(a), hyp(b), hyp(c)]
    total = 0.0
    for i in range(3):
        p, q, s = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        tq = q + mink(p, q) * p
        ts = s + mink(p, s) * p
        cosang = mink(tq, ts) / math.sqrt(mink(tq, tq) * mink(ts, ts))
        total += math.acos(max(-1.0, min(1.0, cosang)))
    return math.pi - total

"""Hyperbolic distance, site sampling, Dirichlet cells and {p,q} tilings."""

import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import (count_components, gf2_rank, hyperbolic_triangle_area_by_angles,
                     is_spanning_tree, radial_distance, simple_cycle)
from treeforge import generators as gen
from treeforge import hyperbolic as hyp
from treeforge.errors import BadParams, NotHyperbolic
from treeforge.graph import Window, bfs_dist, cycle_space_rank
from treeforge.planar import treeing_from_basis


def random_disk_points(rng, k):
    r = np.sqrt(rng.random(k)) * 0.95
    return r * np.exp(2j * math.pi * rng.random(k))


def test_hdist_zero_and_radial():
    assert hyp.hdist(0.3 + 0.1j, 0.3 + 0.1j) == 0
    assert hyp.hdist(0, 0.5) == pytest.approx(radial_distance(0.5), abs=1e-12)
    assert hyp.hdist(0, 0.5) == pytest.approx(2 * math.atanh(0.5))


def test_hdist_metric_axioms():
    rng = np.random.default_rng(0)
    a, b, c = (random_disk_points(rng, 10 ** 4) for _ in range(3))
    dab, dba = hyp.hdist(a, b), hyp.hdist(b, a)
    assert np.allclose(dab, dba, atol=1e-12)
    assert np.all(hyp.hdist(a, c) <= dab + hyp.hdist(b, c) + 1e-9)
    assert np.all(dab >= 0)


def test_hdist_mobius_invariant():
    rng = np.random.default_rng(1)
    a, b = random_disk_points(rng, 100), random_disk_points(rng, 100)
    m = hyp.translation(0.7, 1.1) @ hyp.rotation(0.4)
    assert np.allclose(hyp.hdist(hyp.mobius(m, a), hyp.mobius(m, b)), hyp.hdist(a, b), atol=1e-9)


def test_triangle_area_against_angle_defect():
    rng = np.random.default_rng(2)
    for _ in range(50):
        u, v, w = random_disk_points(rng, 3)
        kl = hyp.to_hyperboloid(np.array([u, v, w]))
        got = hyp.triangle_area(*kl)
        assert got == pytest.approx(hyperbolic_triangle_area_by_angles(u, v, w), abs=1e-9)


def test_poisson_tiny_intensity():
    assert len(hyp.sample_sites(1.0, "poisson", r0=0.1, lam=1e-9, seed=0)) <= 1


def test_poisson_deterministic():
    a = hyp.sample_sites(3.0, "poisson", r0=0.2, lam=5.0, seed=4)
    b = hyp.sample_sites(3.0, "poisson", r0=0.2, lam=5.0, seed=4)
    assert np.array_equal(a, b) and len(a) > 10
    assert hyp.min_separation(a) > 0.2


def test_bad_params():
    with pytest.raises(BadParams):
        hyp.sample_sites(0.1, "poisson", r0=0.5)
    with pytest.raises(BadParams):
        hyp.sample_sites(2.0, "nope", r0=0.5)


def test_genus2_orbit_dedup():
    gens = hyp.genus2_generators()
    inv = {i: (i + 4) % 8 for i in range(8)}
    words = [()] + [(i,) for i in range(8)] + [(i, j) for i in range(8) for j in range(8) if j != inv[i]]
    mats = []
    for w in words:
        m = np.eye(2, dtype=complex)
        for i in w:
            m = m @ gens[i]
        m = m / np.sqrt(np.linalg.det(m))
        if not any(np.allclose(m, x, atol=1e-8) or np.allclose(m, -x, atol=1e-8) for x in mats):
            mats.append(m)
    z = hyp.genus2_orbit(2)
    assert len(z) == len(mats) == 65
    assert hyp.min_separation(z) > 0.5


def test_two_sites():
    t = hyp.dirichlet_cells(np.array([-0.3, 0.3], dtype=complex), 3.0)
    assert t.dual.n == 2 and t.dual.m == 1 and not t.basis.cycles
    assert not hyp.tiling_violations(t)
    # both cells reach the window edge, so the interior part is empty
    assert all(t.dual.boundary) and hyp.tiling_treeing(t).tree.n == 0
    # over the whole dual the single edge survives
    assert treeing_from_basis(t.dual, t.basis).edges == t.dual.edges


def test_four_sites_euler():
    sites = np.array([0.05 + 0.02j, 0.4 + 0.1j, -0.35 + 0.3j, -0.1 - 0.45j])
    t = hyp.dirichlet_cells(sites, 3.0)
    v, e, f = hyp.tessellation_euler(t)
    assert v - e + f == 2
    # inner sides: the Delaunay dual of 4 points in convex position is a
    # triangulated quadrilateral or, with one point inside, a K4
    assert t.dual.m in (5, 6)
    assert not hyp.tiling_violations(t)


def test_genus2_central_octagon():
    s = hyp.sample_sites(4.0, "genus2", r0=0.5, wordlen=2)
    t = hyp.dirichlet_cells(s, 4.0)
    i = int(np.argmin(np.abs(s)))
    assert len(t.cells[i]) == 8 and t.dual.degree(i) == 8
    poly = t.cells[i]
    pd = hyp.from_klein(poly[:, 0] + 1j * poly[:, 1])
    # genus-2 fundamental octagon: area 4 pi, all eight corners meet at one point
    assert hyp.polygon_angle_defect(pd) == pytest.approx(4 * math.pi, abs=1e-9)
    assert hyp.polygon_area_klein(poly) == pytest.approx(4 * math.pi, abs=1e-9)
    assert not hyp.tiling_violations(t, r0=0.5)
    v, e, f = hyp.tessellation_euler(t)
    assert v - e + f == 2


def test_poisson_tiling_basis_and_treeing():
    s = hyp.sample_sites(4.0, "poisson", r0=0.2, lam=2.0, seed=3)
    t = hyp.dirichlet_cells(s, 4.0)
    assert not hyp.tiling_violations(t, r0=0.2)
    sub, old, b = hyp.interior_part(t)
    for c in b.cycles:
        assert simple_cycle([sub.edges[e] for e in c])
    assert gf2_rank([list(c) for c in b.cycles], max(sub.edges) + 1) == cycle_space_rank(sub)
    r = hyp.tiling_treeing(t)
    assert r.tree.m == sub.n - count_components(sub.n, list(sub.edges.values()))
    assert is_spanning_tree(sub.n, list(r.tree.edges.values()))


def test_pq_first_layer():
    w = hyp.gen_pq_tiling(4, 5, 1)
    assert w.n == 6 and w.degree(0) == 5


def test_pq_growth():
    w = hyp.gen_pq_tiling(4, 5, 5)
    assert all(w.degree(v) == 5 for v in w.interior())
    d = bfs_dist(w, [0])
    sizes = [d.count(k) for k in range(max(d) + 1)]
    assert all(b > a for a, b in zip(sizes[1:], sizes[2:]))


def test_pq_not_hyperbolic():
    for p, q in ((3, 6), (4, 4), (6, 3), (3, 3)):
        with pytest.raises(NotHyperbolic):
            hyp.gen_pq_tiling(p, q, 2)


def test_pq_treeing():
    from treeforge.planar import planar_treeing

    w = hyp.gen_pq_tiling(4, 5, 6)
    assert is_spanning_tree(w.n, list(planar_treeing(w).edges.values()))


def test_cost_stat():
    t = Window(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert hyp.treeing_cost_stat(t) == Fraction(4, 5)
    for d in (3, 4, 5):
        assert hyp.treeing_cost_stat(gen.random_regular(d, 100, 0)) == Fraction(d, 2)
    assert hyp.treeing_cost_stat(Window(3)) == 0

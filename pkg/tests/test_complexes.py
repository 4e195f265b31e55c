"""Cell complexes, their duals, forest removal, collapses and homology."""

import networkx as nx
import pytest

from oracles import reduced_betti
from treeforge import complexes as cx
from treeforge import generators as gen
from treeforge.errors import ForestNotSpanning, MalformedComplex, NotSaturated, TooLarge
from treeforge.subforest import forest_violations, from_parent_map


def betti_oracle(c, cells=None):
    levels = []
    for k in range(c.dim + 1):
        ids = {i: fs for i, fs in c.faces[k].items() if cells is None or (k, i) in cells}
        levels.append(ids)
    while len(levels) > 1 and not levels[-1]:
        levels.pop()
    return reduced_betti(levels)


def pad(b, n):
    return list(b) + [0] * (n - len(b))


def strip():
    # three triangles in a row: t0 - t1 - t2, every rim edge singular
    return cx.from_simplices([(0, 1, 2), (1, 2, 3), (2, 3, 4)])


def chain_forest(c):
    """Forest t0 -> t1 -> ... -> t_last -> infinity along consecutive top cells."""
    dual = cx.build_complex_dual(c)
    w = dual.window
    top = len(dual.top_ids)
    parent, pe = {}, {}
    for v in range(top):
        u = v + 1 if v + 1 < top else dual.virtual
        pe[v] = min(e for e, ends in w.edges.items() if set(ends) == {v, u})
        parent[v] = u
    back = {v: [x for x in parent if parent[x] == v] for v in range(w.n)}
    return dual, cx.OrientedForest(pe, parent, w.n, dual.virtual, back)


def test_dual_of_sphere_is_k4():
    c = cx.simplex_boundary(3)
    dual = cx.build_complex_dual(c)
    assert dual.virtual is None and dual.window.m == 6
    g = nx.Graph(list(dual.window.edges.values()))
    assert nx.is_isomorphic(g, nx.complete_graph(4))


def test_dual_of_triangle_and_tetrahedron():
    for d in (2, 3):
        dual = cx.build_complex_dual(cx.simplex(d))
        assert len(dual.top_ids) == 1 and dual.virtual == 1
        assert dual.window.m == d + 1
        assert all(set(e) == {0, 1} for e in dual.window.edges.values())


def test_dual_maps():
    c = strip()
    dual = cx.build_complex_dual(c)
    assert [dual.d_d(v) for v in range(3)] == sorted(c.faces[2])
    assert all(dual.d_d1(e) in c.faces[1] for e in dual.window.edges)


def test_malformed():
    with pytest.raises(MalformedComplex):
        cx.CellComplex(1, [{0: ()}, {0: (0, 5)}])
    with pytest.raises(MalformedComplex):
        # an edge with three triangles on it
        cx.build_complex_dual(cx.from_simplices([(0, 1, 2), (0, 1, 3), (0, 1, 4)]))
    with pytest.raises(MalformedComplex):
        cx.from_simplices([])


def test_ominus_triangle_is_path():
    c = cx.simplex(2)
    dual = cx.build_complex_dual(c)
    f = cx.dual_forest(dual)
    r = cx.ominus_star_complex(c, f, dual)
    assert r.dim == 1 and r.counts() == [3, 2]
    assert pad(cx.homology_gf2(r), 2) == [0, 0]


def test_ominus_square():
    c = cx.disk(1)
    assert c.counts() == [4, 5, 2]
    dual, f = chain_forest(c)
    assert not f.violations(dual)
    r = cx.ominus_star_complex(c, f, dual)
    # both faces, the diagonal and one rim edge leave: a spanning tree on 4 vertices
    assert r.counts() == [4, 3]
    diag = next(e for e, cs in c.cofaces(1).items() if len(cs) == 2)
    assert diag not in r.faces[1]
    assert betti_oracle(r) == [0, 0]


def test_ominus_ball_homology_and_skeleton():
    c = cx.ball(3)
    dual = cx.build_complex_dual(c)
    for seed in (None, 0, 1):
        f = cx.dual_forest(dual, seed)
        assert not f.violations(dual)
        r = cx.ominus_star_complex(c, f, dual)
        assert r.dim == 2
        assert r.faces[0] == c.faces[0] and r.faces[1] == c.faces[1]
        assert betti_oracle(r) == [0, 0, 0]
        assert cx.homology_gf2(r) == [0, 0, 0]


def test_ominus_closed_needs_spanning():
    c = cx.simplex_boundary(3)
    with pytest.raises(ForestNotSpanning):
        cx.dual_forest(cx.build_complex_dual(c))


def test_forest_suite_on_dual():
    c = cx.disk(4)
    dual = cx.build_complex_dual(c)
    for seed in (None, 3):
        f = cx.dual_forest(dual, seed)
        pf = from_parent_map(dual.window, f.head)
        assert not forest_violations(dual.window, pf)


def test_saturate_chain():
    c = strip()
    dual, f = chain_forest(c)
    assert not f.violations(dual)
    esc = f.out[2]
    s = cx.back_orbit_saturate(c, f, {(1, esc)}, close=False, dual=dual)
    assert {(2, t) for t in dual.top_ids} <= s
    assert {(1, f.out[v]) for v in range(3)} <= s
    assert cx.back_orbit_saturate(c, f, s, close=False, dual=dual) == s


def test_saturate_empty_and_idempotent():
    c = cx.disk(3)
    dual = cx.build_complex_dual(c)
    f = cx.dual_forest(dual)
    assert cx.back_orbit_saturate(c, f, set(), dual=dual) == set()
    seed = {(0, 5)}
    s = cx.back_orbit_saturate(c, f, seed, dual=dual)
    assert seed <= s and c.is_subcomplex(s)
    assert cx.back_orbit_saturate(c, f, s, dual=dual) == s
    assert cx.is_saturated(c, f, s, dual)


def test_saturate_monotone():
    c = cx.disk(3)
    dual = cx.build_complex_dual(c)
    f = cx.dual_forest(dual, 2)
    edges = sorted(c.faces[1])
    small = cx.back_orbit_saturate(c, f, {(1, edges[0])}, dual=dual)
    big = cx.back_orbit_saturate(c, f, {(1, edges[0]), (1, edges[7])}, dual=dual)
    assert small <= big


def test_collapse_triangle():
    c = cx.simplex(2)
    dual = cx.build_complex_dual(c)
    f = cx.dual_forest(dual)
    k = cx.back_orbit_saturate(c, f, c.cells(), dual=dual)
    r = cx.collapse_retract(c, f, k, dual)
    assert len(r.steps) == 1 and r.remainder == r.target
    assert len([x for x in r.remainder if x[0] == 1]) == 2


def test_collapse_square():
    c = cx.disk(1)
    dual = cx.build_complex_dual(c)
    f = cx.dual_forest(dual)
    r = cx.collapse_retract(c, f, c.cells(), dual)
    assert len(r.steps) == 2 and r.remainder == r.target
    assert betti_oracle(c, r.remainder) == [0, 0]


def test_collapse_preserves_homology():
    c = cx.disk(5)
    dual = cx.build_complex_dual(c)
    for seed in (None, 0, 1, 2):
        f = cx.dual_forest(dual, seed)
        k = cx.back_orbit_saturate(c, f, {(0, 7), (1, 3)}, dual=dual)
        before = cx.homology_gf2(c, k)
        r = cx.collapse_retract(c, f, k, dual)
        assert r.remainder == r.target
        assert pad(cx.homology_gf2(c, r.remainder), 3) == pad(before, 3)


def test_collapse_unsaturated():
    c = strip()
    dual, f = chain_forest(c)
    # the closure of t2 holds the edge o(t1), whose back-orbit is {t0, t1}
    k = c.closure({(2, dual.top_ids[2])})
    assert cx.is_saturated(c, f, c.closure({(2, dual.top_ids[0])}), dual)
    with pytest.raises(NotSaturated):
        cx.collapse_retract(c, f, k, dual)
    with pytest.raises(NotSaturated):
        cx.collapse_retract(c, f, {(2, dual.top_ids[0])}, dual)


@pytest.mark.parametrize("c,expected", [
    (cx.point(), [0]),
    (cx.circle(3), [0, 1]),
    (cx.simplex_boundary(3), [0, 0, 1]),
    (cx.simplex(3), [0, 0, 0, 0]),
    (cx.disk(4), [0, 0, 0]),
])
def test_homology(c, expected):
    assert cx.homology_gf2(c) == expected
    assert betti_oracle(c) == expected


def test_homology_torus():
    c = cx.torus3(3)
    assert cx.homology_gf2(c) == [0, 3, 3, 1]
    assert betti_oracle(c) == [0, 3, 3, 1]


def test_homology_too_large(monkeypatch):
    monkeypatch.setattr(cx, "MAX_HOMOLOGY_CELLS", 10)
    with pytest.raises(TooLarge):
        cx.homology_gf2(cx.disk(4))


def test_qi_self_is_one():
    w = gen.grid(21)
    r = cx.dual_qi_check(w, 220, w, 220)
    assert r.constant == 1.0 and r.drift == 1.0 and r.ok


def test_qi_ball_vs_grid():
    c = cx.ball(8)
    dual = cx.build_complex_dual(c)
    w = gen.grid3(17)
    r = cx.dual_qi_check(dual.window, cx.complex_dual_center(dual), w, (8 * 17 + 8) * 17 + 8)
    assert r.ok and 1 <= r.constant <= r.c_max


def test_qi_tree_vs_grid_fails():
    t = gen.tree_ball(3, 8)
    g = gen.grid(41)
    r = cx.dual_qi_check(t, 0, g, 20 * 41 + 20, radius=7)
    assert not r.ok


def test_json_roundtrip():
    c = cx.ball(2)
    c2 = cx.CellComplex.from_json(c.to_json())
    assert c2.faces == c.faces


def test_read_off():
    text = "OFF\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n"
    c = cx.read_off(text)
    assert c.counts() == [4, 5, 2]
    assert cx.homology_gf2(c) == [0, 0, 0]
    with pytest.raises(MalformedComplex):
        cx.read_off("OFF\n4 2 0\n0 0 0\n")

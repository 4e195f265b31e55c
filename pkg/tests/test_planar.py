"""2-bases, face tracing, duals and the planar treeing."""

import itertools

import networkx as nx
import pytest

from oracles import count_components, is_spanning_tree, simple_cycle
from treeforge import generators as gen
from treeforge.errors import InvalidBasis, PreconditionViolated, UnknownDualEdge
from treeforge.graph import Window, cycle_space_rank, is_forest
from treeforge.hyperbolic import gen_pq_tiling
from treeforge.planar import (TwoBasis, build_dual, double_dual, duality_check, facial_cycles,
                              ominus_star, planar_treeing, validate_two_basis)


def nxg(w: Window):
    g = nx.MultiGraph()
    g.add_nodes_from(range(w.n))
    g.add_edges_from(w.edges.values())
    return g


def octahedron():
    g = nx.octahedral_graph()
    return nx.MultiGraph(g)


def test_validate_triangle():
    w = gen.cycle(3)
    assert validate_two_basis(w, TwoBasis.of([[0, 1, 2]])).valid


def test_validate_k4_faces():
    w = gen.planar_k4()
    b = facial_cycles(w)
    rep = validate_two_basis(w, b.with_outer())
    assert rep.valid and rep.rank == 3 == cycle_space_rank(w)


def test_validate_empty_basis_rank_deficit():
    rep = validate_two_basis(gen.cycle(4), TwoBasis.of([]))
    assert not rep.valid and rep.rank == 0 and rep.expected_rank == 1


def test_validate_triple_edge():
    w = gen.cycle(3)
    rep = validate_two_basis(w, TwoBasis.of([[0, 1, 2]] * 3))
    assert not rep.valid and rep.edge is not None


def test_facial_cycles_k4():
    w = gen.planar_k4()
    b = facial_cycles(w)
    assert len(b.cycles) == 3 and len(b.outer) == 1
    for c in b.cycles + b.outer:
        assert simple_cycle([w.edges[e] for e in c]) and len(c) == 3


def test_facial_cycles_c6():
    b = facial_cycles(gen.cycle(6))
    assert len(b.cycles) == 1 and len(b.outer) == 1


def test_facial_cycles_grid_euler():
    w = gen.grid(3)
    b = facial_cycles(w)
    assert len(b.cycles) == 4 and all(len(c) == 4 for c in b.cycles)
    assert w.n - w.m + len(b.cycles) + 1 == 2


def test_facial_cycles_random_planar_euler():
    for seed in range(8):
        w = gen.random_planar(40, seed)
        b = facial_cycles(w)
        comps = count_components(w.n, list(w.edges.values()))
        assert w.n - w.m + len(b.cycles) == comps
        assert validate_two_basis(w, b).valid


def test_dual_cycle_no_virtual():
    w = gen.cycle(7)
    d = build_dual(w, TwoBasis.of([list(w.edges)]), attach_virtual_outer=False)
    assert d.window.n == 1 and d.window.m == 0


def test_dual_k4_is_k4():
    w = gen.planar_k4()
    d = build_dual(w, facial_cycles(w).with_outer(), attach_virtual_outer=False)
    assert nx.is_isomorphic(nxg(d.window), nx.MultiGraph(nx.complete_graph(4)))


def test_dual_cube_is_octahedron():
    w = gen.cube()
    d = build_dual(w, facial_cycles(w).with_outer(), attach_virtual_outer=False)
    assert d.window.n == 6 and d.window.m == 12
    assert nx.is_isomorphic(nxg(d.window), octahedron())


def test_dual_invalid_basis():
    with pytest.raises(InvalidBasis):
        build_dual(gen.cycle(4), TwoBasis.of([]))


@pytest.mark.parametrize("w", [gen.planar_k4(), gen.cube()])
def test_double_dual(w):
    r = double_dual(w, facial_cycles(w).with_outer())
    assert r.isomorphic
    assert nx.is_isomorphic(nxg(r.double_dual), nxg(w))


def test_double_dual_precondition():
    w = gen.cycle(4)
    with pytest.raises(PreconditionViolated):
        double_dual(w, TwoBasis.of([list(w.edges)]))


def test_ominus_identity_and_all():
    w = gen.planar_k4()
    d = build_dual(w, facial_cycles(w))
    assert ominus_star(w, d, []).edges == w.edges
    everything = ominus_star(w, d, d.window.edges)
    assert everything.m == 0
    with pytest.raises(UnknownDualEdge):
        ominus_star(w, d, [99])


def test_ominus_all_without_virtual_keeps_single_cycle_edges():
    w = gen.grid(3)
    b = facial_cycles(w)
    d = build_dual(w, b, attach_virtual_outer=False)
    left = ominus_star(w, d, d.window.edges)
    mult = {e: sum(e in c for c in b.cycles) for e in w.edges}
    assert sorted(left.edges) == sorted(e for e in w.edges if mult[e] <= 1)


def test_k4_all_dual_spanning_trees():
    w = gen.planar_k4()
    d = build_dual(w, facial_cycles(w))
    de = sorted(d.window.edges)
    trees = 0
    for sub in itertools.combinations(de, d.window.n - 1):
        pairs = [d.window.edges[e] for e in sub]
        dual_tree = is_spanning_tree(d.window.n, pairs)
        h = ominus_star(w, d, sub)
        primal_tree = is_spanning_tree(w.n, list(h.edges.values()))
        assert dual_tree == primal_tree
        rep = duality_check(w, facial_cycles(w), d, sub)
        assert rep.agree_tree and rep.agree_acyclic
        trees += dual_tree
    assert trees == 16


def test_duality_empty_sub():
    w = gen.planar_k4()
    b = facial_cycles(w)
    rep = duality_check(w, b, build_dual(w, b), [])
    assert not rep.acyclic and not rep.aperiodic_dual and rep.agree_acyclic
    assert "primal_cycle" in rep.certificate


def test_duality_finite_dual_component_on_grid():
    w = gen.grid(4)
    b = facial_cycles(w)
    d = build_dual(w, b)
    # everything except the edges around face 0 connects to the virtual vertex
    sub = [e for e, (u, v) in d.window.edges.items() if 0 not in (u, v)]
    rep = duality_check(w, b, d, sub)
    assert not rep.acyclic and not rep.aperiodic_dual and rep.agree_acyclic
    assert rep.certificate["finite_dual_component"] == [0]


def test_planar_treeing_c6():
    w = gen.cycle(6)
    t = planar_treeing(w)
    assert t.m == 5 and is_spanning_tree(6, list(t.edges.values()))
    assert planar_treeing(w).edges == t.edges


def test_planar_treeing_pq():
    w = gen_pq_tiling(4, 5, 6)
    t = planar_treeing(w)
    assert is_spanning_tree(w.n, list(t.edges.values()))


def test_planar_treeing_single_edge():
    w = gen.path(2)
    assert planar_treeing(w).edges == w.edges


def test_planar_treeing_random():
    for seed in range(10):
        w = gen.random_planar(50, seed, connected=False)
        t = planar_treeing(w)
        assert is_forest(t)
        assert count_components(w.n, list(t.edges.values())) == count_components(
            w.n, list(w.edges.values()))


def test_basis_json_roundtrip():
    b = facial_cycles(gen.cube())
    b2 = TwoBasis.from_json(b.to_json())
    assert b2.cycles == b.cycles

"""Window model, components, cycle rank, ends and colouring."""

import itertools

import pytest

from oracles import count_components, gf2_rank
from treeforge import generators as gen
from treeforge.errors import CenterOnBoundary, DegreeBoundViolated, WindowError
from treeforge.graph import (Window, classify_ends, components, cycle_space_rank,
                             fundamental_cycles, greedy_coloring, is_simple_cycle)


def test_components_empty():
    assert components(Window(0)) == []


def test_components_path():
    comps = components(gen.path(5))
    assert len(comps) == 1 and len(comps[0]) == 5


def test_components_two_triangles():
    w = Window(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    comps = components(w)
    assert sorted(len(c) for c in comps) == [3, 3]
    assert len(comps) == count_components(w.n, list(w.edges.values()))
    assert min(comps[0]) < min(comps[1])


@pytest.mark.parametrize("w,expected", [
    (Window(7, [(i, (i - 1) // 2) for i in range(1, 7)]), 0),
    (gen.complete(4), 3),
    (gen.cycle(6), 1),
])
def test_cycle_space_rank(w, expected):
    assert cycle_space_rank(w) == expected
    cyc = fundamental_cycles(w)
    assert gf2_rank([list(c) for c in cyc], max(w.edges, default=0) + 1) == expected
    assert all(is_simple_cycle(w, c) for c in cyc)


def test_cycle_rank_random_graphs():
    for seed in range(10):
        w = gen.random_planar(30, seed)
        cyc = fundamental_cycles(w)
        expected = w.m - w.n + count_components(w.n, list(w.edges.values()))
        assert cycle_space_rank(w) == expected
        assert gf2_rank([list(c) for c in cyc], max(w.edges) + 1) == expected


def test_classify_ends_path_two():
    w = gen.path(31)
    assert classify_ends(w, 15).label == "two"


def test_classify_ends_grid_one():
    w = gen.grid(31)
    assert classify_ends(w, 15 * 31 + 15).label == "one"


def test_classify_ends_tree_many():
    w = gen.tree_ball(3, 8)
    ec = classify_ends(w, 0)
    assert ec.label == "many"
    # deleting the closed k-ball leaves one subtree below each of the
    # 3 * 2^(k-1) vertices of the k-sphere, two per sphere vertex
    assert list(ec.counts) == [3 * 2 ** k for k in range(1, len(ec.counts) + 1)]


def test_classify_ends_finite_and_boundary_center():
    assert classify_ends(gen.cycle(5), 0).label == "finite"
    with pytest.raises(CenterOnBoundary):
        classify_ends(gen.path(5), 0)


def _proper(w, col):
    return all(col[u] != col[v] for u, v in w.edges.values())


def test_coloring_edgeless():
    assert greedy_coloring(Window(4), 0) == [0, 0, 0, 0]


def test_coloring_c5():
    w = gen.cycle(5)
    col = greedy_coloring(w, 2)
    assert _proper(w, col) and len(set(col)) == 3


def test_coloring_k4_and_bound():
    w = gen.complete(4)
    col = greedy_coloring(w, 3)
    assert _proper(w, col) and len(set(col)) == 4
    with pytest.raises(DegreeBoundViolated):
        greedy_coloring(w, 2)


def test_coloring_adjacency_list():
    adj = [[1, 2], [0], [0]]
    assert greedy_coloring(adj, 2) == [0, 1, 1]


def test_window_validation():
    with pytest.raises(WindowError):
        Window(2, [(0, 0)])
    with pytest.raises(WindowError):
        Window(2, [(0, 2)])
    with pytest.raises(WindowError):
        Window(2, [], [5])


def test_window_json_roundtrip():
    w = gen.grid(4)
    w2 = Window.from_json(w.to_json())
    assert w2.edges == w.edges and w2.boundary == w.boundary and w2.pos == w.pos


def test_window_immutable():
    w = gen.path(3)
    with pytest.raises(AttributeError):
        w.n = 4


def test_induced_keeps_edge_ids():
    w = gen.cycle(5)
    sub, old = w.induced([0, 2, 1])
    assert old == [0, 1, 2] and sorted(sub.edges) == [0, 1]


def test_with_edges_subset():
    w = gen.complete(5)
    for keep in itertools.combinations(sorted(w.edges), 3):
        assert sorted(w.with_edges(keep).edges) == list(keep)

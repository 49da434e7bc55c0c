import pytest
from hypothesis import given
from hypothesis import strategies as st

from phylotri.graph import MulticoloredGraph, verify_triangulation
from phylotri.oracles import brute_force_tcg_elimination
from phylotri.reductions.multicolor import reduce_tmg_to_tcg
from phylotri.solver import solve_tcg
from phylotri.treedecomp import (
    DecompositionError,
    TreeDecomposition,
    color_multiplicity_ok,
    first_violation,
    normalize_exactly_once,
    treedecomp_to_triangulation,
    triangulation_to_treedecomp,
    verify_tree_decomposition,
)
from phylotri.zipper import build_zipper_gadget, canonical_gadget_triangulation

from strategies import colored_graphs

PATH = MulticoloredGraph.colored([0, 1, 0], [(0, 1), (1, 2)])


def simple_paths(g, src, dst):
    stack = [(src, [src])]
    while stack:
        x, path = stack.pop()
        if x == dst:
            yield path
            continue
        for y in g.adj[x]:
            if y not in path:
                stack.append((y, path + [y]))


def test_single_bag_is_valid():
    g = MulticoloredGraph.colored([0, 1, 2, 0], [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert verify_tree_decomposition(g, TreeDecomposition.make([g.vertices], [], g))


def test_path_decomposition():
    td = TreeDecomposition.make([{0, 1}, {1, 2}], [(0, 1)], PATH)
    assert verify_tree_decomposition(PATH, td)
    assert treedecomp_to_triangulation(PATH, td) == frozenset()


def test_disconnected_vertex_subtree_rejected():
    td = TreeDecomposition.make([{0, 1}, {2}, {1, 2}], [(0, 1), (1, 2)], PATH)
    assert first_violation(PATH, td) == "bags holding vertex 1 are not connected"


def test_missing_edge_named():
    td = TreeDecomposition.make([{0, 1}, {2}], [(0, 1)], PATH)
    assert first_violation(PATH, td) == "edge 1-2 is in no bag"


def test_foreign_graph_rejected():
    other = MulticoloredGraph.colored([0, 1, 0], [(0, 1)])
    td = TreeDecomposition.make([{0, 1}, {1, 2}], [(0, 1)], PATH)
    with pytest.raises(DecompositionError):
        verify_tree_decomposition(other, td)


def test_multiplicity_examples():
    g = MulticoloredGraph.build([[0], [1]], [(0, 1)])
    td = TreeDecomposition.make([{0, 1}], [], g)
    assert color_multiplicity_ok(g, td, "exactly-once")
    clash = MulticoloredGraph.build([[1, 3], [2, 3]], [])
    td = TreeDecomposition.make([{0, 1}], [], clash)
    assert not color_multiplicity_ok(clash, td, "at-most-once")


def test_normalize_copies_missing_color():
    g = MulticoloredGraph.colored([0, 1, 2], [(0, 1), (1, 2)])
    td = TreeDecomposition.make([{0, 1}, {1, 2}], [(0, 1)], g)
    out = normalize_exactly_once(g, td)
    assert out.bags == (frozenset({0, 1, 2}), frozenset({0, 1, 2}))
    assert normalize_exactly_once(g, out) == out


def test_normalize_rejects_phantom_color():
    g = MulticoloredGraph.build([[0], [2]], [], num_colors=3)
    with pytest.raises(DecompositionError):
        normalize_exactly_once(g, TreeDecomposition.make([{0, 1}], [], g))


def test_c4_chord():
    g = MulticoloredGraph.colored([0, 1, 2, 1], [(0, 1), (1, 2), (2, 3), (0, 3)])
    td = TreeDecomposition.make([{0, 1, 2}, {0, 2, 3}], [(0, 1)], g)
    assert treedecomp_to_triangulation(g, td) == {(0, 2)}


def test_triangle_single_clique():
    g = MulticoloredGraph.colored([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    td = triangulation_to_treedecomp(g, [])
    assert td.bags == (frozenset({0, 1, 2}),)


def test_improper_fill_rejected():
    g = MulticoloredGraph.colored([0, 1, 0, 1], [(0, 1), (1, 2), (2, 3), (0, 3)])
    with pytest.raises(DecompositionError):
        triangulation_to_treedecomp(g, [(0, 2)])


def test_gadget_clique_tree_bags_small():
    gd = build_zipper_gadget(2, 1)
    td = triangulation_to_treedecomp(gd.graph, canonical_gadget_triangulation(gd, 0))
    assert max(len(b) for b in td.bags) <= 4
    assert verify_tree_decomposition(gd.graph, td)
    # two colors per vertex: normalize on the one-color-per-vertex expansion
    expanded, prov = reduce_tmg_to_tcg(gd.graph)
    split = TreeDecomposition.make(
        [[m for v in bag for m in prov.members[v]] for bag in td.bags], td.tree_edges, expanded
    )
    norm = normalize_exactly_once(expanded, split)
    assert verify_tree_decomposition(expanded, norm)
    assert color_multiplicity_ok(expanded, norm, "exactly-once")
    assert expanded.k == 7
    assert all(b <= nb for b, nb in zip(split.bags, norm.bags))


@given(colored_graphs(max_n=6))
def test_round_trip(g):
    fill = brute_force_tcg_elimination(g)
    if fill is None:
        return
    td = triangulation_to_treedecomp(g, fill)
    assert verify_tree_decomposition(g, td)
    assert color_multiplicity_ok(g, td)
    back = treedecomp_to_triangulation(g, td)
    assert verify_triangulation(g, back)
    again = triangulation_to_treedecomp(g, back)
    assert verify_tree_decomposition(g, again) and color_multiplicity_ok(g, again)


@given(colored_graphs(max_n=6), st.data())
def test_normalize_only_adds(g, data):
    fill = brute_force_tcg_elimination(g)
    if fill is None:
        return
    td = triangulation_to_treedecomp(g, fill)
    out = normalize_exactly_once(g, td)
    assert verify_tree_decomposition(g, out)
    assert color_multiplicity_ok(g, out, "exactly-once")
    assert all(a <= b for a, b in zip(td.bags, out.bags))
    added = sum(len(b) - len(a) for a, b in zip(td.bags, out.bags))
    assert added <= len(td.bags) * g.k


@given(colored_graphs(max_n=6, connected=True))
def test_bags_on_tree_path_meet_every_graph_path(g):
    td = solve_tcg(g)
    if td is None:
        return
    for b1 in range(len(td.bags)):
        for b2 in range(b1 + 1, len(td.bags)):
            between = td.tree_path(b1, b2)
            for v in td.bags[b1]:
                for w in td.bags[b2]:
                    for path in simple_paths(g, v, w):
                        assert all(td.bags[b] & set(path) for b in between)

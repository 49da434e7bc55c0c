import itertools
import random

import pytest
from hypothesis import given

from phylotri.graph import GraphError, MulticoloredGraph, verify_triangulation
from phylotri.oracles import (
    brute_force_tcg_elimination,
    four_gamete_pp,
    verify_perfect_phylogeny,
)
from phylotri.reductions.multicolor import reduce_tmg_to_tcg
from phylotri.reductions.phylogeny import PhylogenyInstance
from phylotri.solver import SolverTimeout, solve_pp, solve_tcg, solve_tmg
from phylotri.treedecomp import (
    color_multiplicity_ok,
    treedecomp_to_triangulation,
    verify_tree_decomposition,
)
from phylotri.zipper import build_zipper_gadget, canonical_gadget_triangulation, read_gadget_offset

from strategies import binary_species, colored_graphs, multicolored_graphs


def alt_cycle(n):
    return MulticoloredGraph.colored([i % 2 for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def check_tcg_witness(g, td):
    assert verify_tree_decomposition(g, td)
    assert color_multiplicity_ok(g, td, "exactly-once")
    assert verify_triangulation(g, treedecomp_to_triangulation(g, td))


def test_alternating_c4_unsat():
    assert solve_tcg(alt_cycle(4)) is None


def test_complete_graph_single_bag():
    k5 = MulticoloredGraph.colored(range(5), itertools.combinations(range(5), 2))
    td = solve_tcg(k5)
    assert td.bags == (frozenset(range(5)),)


def test_c5_agrees_with_oracle():
    c5 = MulticoloredGraph.colored([0, 1, 2, 0, 1], [(i, (i + 1) % 5) for i in range(5)])
    td = solve_tcg(c5)
    assert (td is None) == (brute_force_tcg_elimination(c5) is None)
    check_tcg_witness(c5, td)


def test_tmg_input_rejected():
    with pytest.raises(GraphError):
        solve_tcg(MulticoloredGraph.build([[0, 1], [2]], [(0, 1)]))


def test_missing_color_rejected():
    with pytest.raises(GraphError):
        solve_tcg(MulticoloredGraph.build([[0], [2]], [(0, 1)], mode="tcg", num_colors=3))


def test_disconnected_graph():
    g = MulticoloredGraph.colored([0, 1, 0, 1, 2], [(0, 1), (2, 3), (3, 4)])
    check_tcg_witness(g, solve_tcg(g))


def test_gadget_10_unique_triangulation():
    gd = build_zipper_gadget(1, 0)
    td = solve_tmg(gd.graph)
    assert td is not None
    fill = treedecomp_to_triangulation(gd.graph, td)
    assert fill == canonical_gadget_triangulation(gd, 0)


def test_gadget_21_offset_in_range():
    gd = build_zipper_gadget(2, 1)
    td = solve_tmg(gd.graph)
    assert color_multiplicity_ok(gd.graph, td)
    assert read_gadget_offset(gd, treedecomp_to_triangulation(gd.graph, td)) in (0, 1)


def test_head_tail_edge_unsat():
    gd = build_zipper_gadget(1, 0)
    g = gd.graph.with_edges([(gd.head, gd.tail)])
    assert solve_tmg(g) is None


def test_empty_color_set_rejected():
    with pytest.raises(GraphError):
        solve_tmg(MulticoloredGraph.build([[0], []], [(0, 1)]))


def test_pp_examples():
    tree = solve_pp(PhylogenyInstance.of([(0, 0), (0, 1), (1, 0)]))
    assert tree is not None and len(tree.nodes) >= 3
    assert solve_pp(PhylogenyInstance.of([(0, 0), (0, 1), (1, 0), (1, 1)])) is None
    one = solve_pp(PhylogenyInstance.of([(2, 0, 1)]))
    assert one.nodes == ((2, 0, 1),) and not one.edges


def test_timeout_reported():
    rng = random.Random(3)
    g = MulticoloredGraph.colored(
        [rng.randrange(6) for _ in range(40)] ,
        [(u, v) for u in range(40) for v in range(u + 1, 40) if rng.random() < 0.15],
    )
    with pytest.raises(SolverTimeout):
        solve_tcg(g, timeout_ms=0)


@pytest.mark.parametrize("n", range(4, 11))
def test_alternating_cycles_unsat(n):
    assert solve_tcg(alt_cycle(n)) is None


@given(colored_graphs(max_n=7, max_colors=3))
def test_agrees_with_elimination_oracle(g):
    td = solve_tcg(g)
    assert (td is None) == (brute_force_tcg_elimination(g) is None)
    if td is not None:
        check_tcg_witness(g, td)


@given(colored_graphs(max_n=7, max_colors=4))
def test_memo_is_transparent(g):
    assert (solve_tcg(g) is None) == (solve_tcg(g, memo=False) is None)


@given(multicolored_graphs())
def test_tmg_agrees_with_expanded_oracle(g):
    if g.used_colors != frozenset(range(g.num_colors)):
        return
    td = solve_tmg(g)
    expanded, _ = reduce_tmg_to_tcg(g)
    assert (td is None) == (brute_force_tcg_elimination(expanded, max_vertices=12) is None)
    if td is not None:
        assert verify_tree_decomposition(g, td)
        assert color_multiplicity_ok(g, td)


@given(binary_species())
def test_pp_agrees_with_four_gametes(data):
    genes, rows = data
    inst = PhylogenyInstance(genes, tuple(rows))
    tree = solve_pp(inst)
    assert (tree is not None) == four_gamete_pp(inst)
    if tree is not None:
        assert verify_perfect_phylogeny(inst, tree)

import random

import pytest
from hypothesis import given

from phylotri.generate import TcmisShape, random_tcmis
from phylotri.graph import MulticoloredGraph, verify_triangulation
from phylotri.oracles import (
    OracleRefusal,
    brute_force_tcg_elimination,
    brute_force_tcmis,
    exhaustive_triangulation_count,
    four_gamete_pp,
    is_minimal_triangulation,
    phylogeny_violation,
    verify_perfect_phylogeny,
    verify_tcmis_solution,
)
from phylotri.reductions import PhylogenyInstance, PhylogenyTree, TcmisInstance
from phylotri.zipper import build_zipper_gadget

from strategies import colored_graphs


def tree(nodes, edges):
    return PhylogenyTree(tuple(nodes), frozenset(edges))


def test_alternating_c4_has_no_fill():
    c4 = MulticoloredGraph.colored([0, 1, 0, 1], [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert brute_force_tcg_elimination(c4) is None


def test_tree_needs_no_fill():
    t = MulticoloredGraph.colored([0, 1, 0, 2, 1], [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert brute_force_tcg_elimination(t) == frozenset()


def test_c5_witness():
    c5 = MulticoloredGraph.colored([0, 1, 2, 0, 1], [(i, (i + 1) % 5) for i in range(5)])
    fill = brute_force_tcg_elimination(c5)
    assert fill is not None and verify_triangulation(c5, fill)


def test_elimination_guard():
    with pytest.raises(OracleRefusal):
        brute_force_tcg_elimination(MulticoloredGraph.colored(range(10), []))


def test_tcmis_examples():
    single = TcmisInstance(1, 1, (), {(0, 0): 1})
    assert brute_force_tcmis(single) == {(0, 0): 0}
    clash = TcmisInstance(1, 2, (), {(0, 0): 1, (0, 1): 1}, (((0, 0, 0), (0, 1, 0)),))
    assert brute_force_tcmis(clash) is None


def test_tcmis_guard():
    big = TcmisInstance(1, 7, (), {(0, c): 10 for c in range(7)})
    with pytest.raises(OracleRefusal):
        brute_force_tcmis(big)


def test_verify_tcmis():
    inst = TcmisInstance(2, 1, ((0, 1),), {(0, 0): 2, (1, 0): 2}, (((0, 0, 1), (1, 0, 0)),))
    assert verify_tcmis_solution(inst, {(0, 0): 0, (1, 0): 0})
    assert not verify_tcmis_solution(inst, {(0, 0): 1, (1, 0): 0})
    assert not verify_tcmis_solution(inst, {(0, 0): 0})
    assert not verify_tcmis_solution(inst, {(0, 0): 2, (1, 0): 0})


def test_empty_edges_any_choice():
    inst = TcmisInstance(1, 2, (), {(0, 0): 3, (0, 1): 2})
    assert all(verify_tcmis_solution(inst, {(0, 0): a, (0, 1): b}) for a in range(3) for b in range(2))


def test_phylogeny_examples():
    one = PhylogenyInstance.of([(0, 0)])
    assert verify_perfect_phylogeny(one, tree([(0, 0)], []))
    inst = PhylogenyInstance.of([(0, 0), (0, 1), (1, 1)])
    assert verify_perfect_phylogeny(inst, tree([(0, 0), (0, 1), (1, 1)], [(0, 1), (1, 2)]))
    bad = tree([(0, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)])
    assert phylogeny_violation(inst, bad) == "gene 0 variant 0 is not connected"


def test_phylogeny_structure_checks():
    inst = PhylogenyInstance.of([(0, 0), (0, 1)])
    assert "missing" in phylogeny_violation(inst, tree([(0, 0)], []))
    assert "edges" in phylogeny_violation(inst, tree([(0, 0), (0, 1)], []))


def test_four_gamete_examples():
    assert four_gamete_pp(PhylogenyInstance.of([(0, 0), (0, 1), (1, 0)]))
    assert not four_gamete_pp(PhylogenyInstance.of([(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert four_gamete_pp(PhylogenyInstance.of([(0,), (1,)]))
    with pytest.raises(OracleRefusal):
        four_gamete_pp(PhylogenyInstance.of([(0,), (1,), (2,)]))


@pytest.mark.parametrize("n,s", [(1, 0), (1, 1), (2, 1)])
def test_gadget_counts(n, s):
    gd = build_zipper_gadget(n, s)
    top = [gd.head, *gd.p, gd.tail]
    cands = [(u, v) for u in top for v in gd.q]
    assert exhaustive_triangulation_count(gd.graph, cands) == s + 1


def test_count_unrestricted_small():
    # only the fan at vertex 2 avoids joining two equal colors
    c5 = MulticoloredGraph.colored([0, 1, 2, 0, 1], [(i, (i + 1) % 5) for i in range(5)])
    assert exhaustive_triangulation_count(c5) == 1
    c5 = MulticoloredGraph.colored(range(5), [(i, (i + 1) % 5) for i in range(5)])
    assert exhaustive_triangulation_count(c5) == 5


def test_count_guard():
    with pytest.raises(OracleRefusal):
        exhaustive_triangulation_count(MulticoloredGraph.colored(range(25), []))


def test_minimality():
    c4 = MulticoloredGraph.colored([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert is_minimal_triangulation(c4, frozenset({(0, 2)}))
    assert not is_minimal_triangulation(c4, frozenset({(0, 2), (1, 3)}))
    assert not is_minimal_triangulation(c4, frozenset())


@given(colored_graphs(max_n=7))
def test_elimination_witness_is_valid(g):
    fill = brute_force_tcg_elimination(g)
    if fill is not None:
        assert verify_triangulation(g, fill)
        assert is_minimal_triangulation(g, fill)


def test_tcmis_oracle_output_verifies():
    rng = random.Random(7)
    for _ in range(100):
        inst = random_tcmis(rng, TcmisShape())
        sol = brute_force_tcmis(inst)
        if sol is not None:
            assert verify_tcmis_solution(inst, sol)

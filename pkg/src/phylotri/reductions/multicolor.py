"""Multicolored to colored graphs: each vertex becomes a clique, one member per color."""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import GraphError, MulticoloredGraph, colors_of_mask
from ..treedecomp import TreeDecomposition, graph_ref


@dataclass(frozen=True)
class CliqueProvenance:
    members: tuple[tuple[int, ...], ...]  # original vertex -> its clique
    origin: tuple[int, ...]  # expanded vertex -> original vertex


def reduce_tmg_to_tcg(g: MulticoloredGraph) -> tuple[MulticoloredGraph, CliqueProvenance]:
    members = []
    origin = []
    colors = []
    for v in g.vertices:
        cs = colors_of_mask(g.masks[v])
        if not cs:
            raise GraphError(f"vertex {v} has no colors; the clique expansion would delete it")
        ids = []
        for c in cs:
            ids.append(len(origin))
            origin.append(v)
            colors.append(c)
        members.append(tuple(ids))
    edges = []
    for clique in members:
        for i, a in enumerate(clique):
            for b in clique[i + 1:]:
                edges.append((a, b))
    for u, v in g.edges:
        for a in members[u]:
            for b in members[v]:
                edges.append((a, b))
    expanded = MulticoloredGraph.build([[c] for c in colors], edges, mode="tcg",
                                       num_colors=g.num_colors)
    return expanded, CliqueProvenance(tuple(members), tuple(origin))


def lift_tcg_decomposition_to_tmg(g: MulticoloredGraph, td: TreeDecomposition,
                                  prov: CliqueProvenance) -> TreeDecomposition:
    """Same tree; a bag keeps ``v`` iff it held the whole clique of ``v``."""
    bags = []
    for bag in td.bags:
        bags.append(frozenset(v for v in g.vertices if all(x in bag for x in prov.members[v])))
    return TreeDecomposition(tuple(bags), td.tree_edges, graph_ref(g))

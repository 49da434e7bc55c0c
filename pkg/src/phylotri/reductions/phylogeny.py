"""Perfect phylogeny as colored triangulation (partition intersection graph)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..graph import GraphError, MulticoloredGraph
from ..treedecomp import DecompositionError, TreeDecomposition


@dataclass(frozen=True)
class PhylogenyInstance:
    """Species as tuples of variant ids, one per gene."""

    num_genes: int
    species: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.species:
            raise GraphError("at least one species is required")
        for s in self.species:
            if len(s) != self.num_genes:
                raise GraphError(f"species {s} does not have {self.num_genes} genes")
        if len(set(self.species)) != len(self.species):
            raise GraphError("duplicate species")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"s{i}" for i in range(len(self.species))))
        elif len(self.names) != len(self.species):
            raise GraphError("one name per species required")

    @classmethod
    def of(cls, species) -> "PhylogenyInstance":
        rows = tuple(tuple(s) for s in species)
        return cls(len(rows[0]) if rows else 0, rows)

    def variants(self, gene: int) -> list[int]:
        return sorted({s[gene] for s in self.species})


@dataclass(frozen=True)
class PhylogenyTree:
    nodes: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    leaf_map: dict[int, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PPProvenance:
    label: tuple[tuple[int, int], ...]  # vertex -> (gene, variant)

    def vertex_of(self) -> dict[tuple[int, int], int]:
        return {lab: v for v, lab in enumerate(self.label)}


def reduce_pp_to_tcg(inst: PhylogenyInstance) -> tuple[MulticoloredGraph, PPProvenance]:
    labels = [(g, x) for g in range(inst.num_genes) for x in inst.variants(g)]
    index = {lab: v for v, lab in enumerate(labels)}
    edges = set()
    for s in inst.species:
        vs = [index[(g, x)] for g, x in enumerate(s)]
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                edges.add((vs[i], vs[j]))
    g = MulticoloredGraph.build([[lab[0]] for lab in labels], edges, mode="tcg",
                                num_colors=inst.num_genes)
    return g, PPProvenance(tuple(labels))


def extract_phylogeny(inst: PhylogenyInstance, td: TreeDecomposition,
                      prov: PPProvenance) -> PhylogenyTree:
    """Read each exactly-once bag as a species tuple; the bag tree is the phylogeny."""
    nodes = []
    for i, bag in enumerate(td.bags):
        row: list[Optional[int]] = [None] * inst.num_genes
        for v in bag:
            gene, x = prov.label[v]
            if row[gene] is not None:
                raise DecompositionError(f"bag {i} holds gene {gene} twice")
            row[gene] = x
        if any(x is None for x in row):
            raise DecompositionError(f"bag {i} misses a gene; normalize the decomposition first")
        nodes.append(tuple(row))
    index = {node: i for i, node in reversed(list(enumerate(nodes)))}
    leaf_map = {}
    for si, s in enumerate(inst.species):
        if s not in index:
            raise DecompositionError(f"no bag holds species {inst.names[si]}")
        leaf_map[si] = index[s]
    return PhylogenyTree(tuple(nodes), frozenset(td.tree_edges), leaf_map)

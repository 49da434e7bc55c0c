"""Brute-force reference implementations and witness verifiers.

Everything here is deliberately exponential and guarded by size limits.
None of it shares code paths with the solver or the reductions beyond the
graph type itself.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Optional

from .graph import Edge, MulticoloredGraph, is_chordal, norm_edge
from .reductions.phylogeny import PhylogenyInstance, PhylogenyTree
from .reductions.tcmis import TcmisInstance, TcmisSolution


class OracleRefusal(ValueError):
    """The instance exceeds the oracle's size guard."""


def _elim_neighbors(g: MulticoloredGraph, eliminated: int, v: int) -> list[int]:
    """Neighbours of ``v`` in the elimination graph after removing ``eliminated``."""
    seen = {v}
    out = []
    stack = [v]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if eliminated >> y & 1:
                stack.append(y)
            else:
                out.append(y)
    return out


def _proper_clique(g: MulticoloredGraph, vs: Iterable[int]) -> bool:
    acc = 0
    for x in vs:
        if acc & g.masks[x]:
            return False
        acc |= g.masks[x]
    return True


def _fill_of_order(g: MulticoloredGraph, order: list[int]) -> frozenset[Edge]:
    fill = set()
    elim = 0
    for v in order:
        nb = sorted(_elim_neighbors(g, elim, v))
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if (a, b) not in g.edges:
                    fill.add((a, b))
        elim |= 1 << v
    return frozenset(fill)


def brute_force_tcg_elimination(g: MulticoloredGraph, max_vertices: int = 9) -> Optional[frozenset[Edge]]:
    """A properly colored triangulation found by trying elimination orderings.

    Every minimal triangulation is the fill of some elimination ordering and
    removing fill edges never breaks a proper coloring, so it suffices to
    search orderings whose every elimination clique is properly colored.
    The fill found is then thinned to a minimal one.
    The elimination graph depends only on the set already eliminated, which
    makes failed sets safe to memoize.
    """
    if g.n > max_vertices:
        raise OracleRefusal(f"{g.n} vertices exceeds the guard of {max_vertices}")
    full = (1 << g.n) - 1
    dead: set[int] = set()
    order: list[int] = []

    def go(elim: int) -> bool:
        if elim == full:
            return True
        if elim in dead:
            return False
        for v in range(g.n):
            if elim >> v & 1:
                continue
            if _proper_clique(g, [v, *_elim_neighbors(g, elim, v)]):
                order.append(v)
                if go(elim | 1 << v):
                    return True
                order.pop()
        dead.add(elim)
        return False

    if not go(0):
        return None
    return minimalize_fill(g, _fill_of_order(g, order))


def minimalize_fill(g: MulticoloredGraph, fill: frozenset[Edge]) -> frozenset[Edge]:
    """Drop fill edges one at a time while the supergraph stays chordal.

    A triangulation from which no single fill edge can be removed is
    minimal, so the greedy pass ends at a minimal one.
    """
    out = set(fill)
    changed = True
    while changed:
        changed = False
        for e in sorted(out):
            if is_chordal(g.with_edges(out - {e})):
                out.discard(e)
                changed = True
    return frozenset(out)


def is_minimal_triangulation(g: MulticoloredGraph, fill: frozenset[Edge]) -> bool:
    """Chordal, and dropping any single fill edge breaks chordality."""
    h = g.with_edges(fill)
    if not is_chordal(h):
        return False
    for e in fill:
        if is_chordal(g.with_edges(fill - {e})):
            return False
    return True


def exhaustive_triangulation_count(g: MulticoloredGraph,
                                   candidates: Optional[Iterable[Edge]] = None,
                                   max_vertices: int = 24,
                                   max_states: int = 2_000_000) -> int:
    """Number of distinct edge-minimal properly multicolored triangulations.

    Walks every elimination ordering whose cliques are properly colored and
    whose fill stays inside ``candidates`` (all pairs when ``None``), with
    (eliminated set, fill so far) states deduplicated.  Resulting fills are
    kept only when minimal.
    """
    if g.n > max_vertices:
        raise OracleRefusal(f"{g.n} vertices exceeds the guard of {max_vertices}")
    allowed = None if candidates is None else {norm_edge(u, v) for u, v in candidates}
    full = (1 << g.n) - 1
    seen: set[tuple[int, frozenset[Edge]]] = set()
    finals: set[frozenset[Edge]] = set()
    queue = deque([(0, frozenset())])
    seen.add((0, frozenset()))
    while queue:
        elim, fill = queue.popleft()
        if elim == full:
            finals.add(fill)
            continue
        for v in range(g.n):
            if elim >> v & 1:
                continue
            nb = _elim_neighbors(g, elim, v)
            if not _proper_clique(g, [v, *nb]):
                continue
            new = set()
            ok = True
            nb.sort()
            for i, a in enumerate(nb):
                for b in nb[i + 1:]:
                    e = (a, b)
                    if e in g.edges or e in fill:
                        continue
                    if allowed is not None and e not in allowed:
                        ok = False
                        break
                    new.add(e)
                if not ok:
                    break
            if not ok:
                continue
            state = (elim | 1 << v, fill | new)
            if state not in seen:
                if len(seen) >= max_states:
                    raise OracleRefusal("state budget exhausted")
                seen.add(state)
                queue.append(state)
    return sum(1 for f in finals if is_minimal_triangulation(g, f))


def verify_tcmis_solution(inst: TcmisInstance, sol: TcmisSolution) -> bool:
    for key, size in inst.class_sizes.items():
        if key not in sol or not 0 <= sol[key] < size:
            return False
    for (n1, c1, i1), (n2, c2, i2) in inst.edges:
        if sol[(n1, c1)] == i1 and sol[(n2, c2)] == i2:
            return False
    return True


def brute_force_tcmis(inst: TcmisInstance, max_product: int = 10**6) -> Optional[TcmisSolution]:
    keys = sorted(inst.class_sizes)
    total = 1
    for key in keys:
        total *= inst.class_sizes[key]
    if total > max_product:
        raise OracleRefusal(f"{total} candidate choices exceeds the guard of {max_product}")
    for combo in itertools.product(*(range(inst.class_sizes[key]) for key in keys)):
        sol = dict(zip(keys, combo))
        if verify_tcmis_solution(inst, sol):
            return sol
    return None


def phylogeny_violation(inst: PhylogenyInstance, tree: PhylogenyTree) -> Optional[str]:
    num = len(tree.nodes)
    if num == 0:
        return "tree has no nodes"
    adj: list[list[int]] = [[] for _ in range(num)]
    for a, b in tree.edges:
        if not (0 <= a < num and 0 <= b < num) or a == b:
            return f"bad tree edge ({a}, {b})"
        adj[a].append(b)
        adj[b].append(a)
    if len(tree.edges) != num - 1:
        return "tree has the wrong number of edges"
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != num:
        return "tree is not connected"
    labels = set(tree.nodes)
    for i, s in enumerate(inst.species):
        if s not in labels:
            return f"species {inst.names[i]} is missing from the tree"
    for node in tree.nodes:
        if len(node) != inst.num_genes:
            return f"node {node} has the wrong number of genes"
    for gene in range(inst.num_genes):
        for x in sorted({node[gene] for node in tree.nodes}):
            holders = {i for i, node in enumerate(tree.nodes) if node[gene] == x}
            start = min(holders)
            reach = {start}
            stack = [start]
            while stack:
                a = stack.pop()
                for b in adj[a]:
                    if b in holders and b not in reach:
                        reach.add(b)
                        stack.append(b)
            if reach != holders:
                return f"gene {gene} variant {x} is not connected"
    return None


def verify_perfect_phylogeny(inst: PhylogenyInstance, tree: PhylogenyTree) -> bool:
    return phylogeny_violation(inst, tree) is None


def four_gamete_pp(inst: PhylogenyInstance) -> bool:
    """Pairwise compatibility test for two-state characters."""
    for gene in range(inst.num_genes):
        if len({s[gene] for s in inst.species}) > 2:
            raise OracleRefusal(f"gene {gene} has more than two variants")
    for g1, g2 in itertools.combinations(range(inst.num_genes), 2):
        if len({(s[g1], s[g2]) for s in inst.species}) == 4:
            return False
    return True

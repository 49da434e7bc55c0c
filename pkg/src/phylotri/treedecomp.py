"""Tree decompositions with per-bag color multiplicity checks.

A decomposition whose bags each hold every color at most once is the same
thing as a properly colored triangulation: the union of bag cliques is
chordal, and the maximal cliques of a chordal graph form a tree.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import (
    Edge,
    GraphError,
    MulticoloredGraph,
    mcs_order,
    norm_edge,
    verify_triangulation,
)


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class GraphRef:
    """Identity of the decomposed graph; unknown fields are ``None``."""

    n: int
    m: Optional[int] = None
    digest: Optional[str] = None


def graph_ref(g: MulticoloredGraph) -> GraphRef:
    h = hashlib.sha1()
    h.update(repr((g.n, g.masks, sorted(g.edges))).encode())
    return GraphRef(g.n, len(g.edges), h.hexdigest()[:16])


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: frozenset[Edge]
    ref: Optional[GraphRef] = None

    @classmethod
    def make(cls, bags: Iterable[Iterable[int]], tree_edges: Iterable[tuple[int, int]],
             g: Optional[MulticoloredGraph] = None) -> "TreeDecomposition":
        return cls(
            tuple(frozenset(b) for b in bags),
            frozenset(norm_edge(a, b) for a, b in tree_edges),
            graph_ref(g) if g is not None else None,
        )

    def neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in sorted(self.tree_edges):
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def tree_path(self, src: int, dst: int) -> list[int]:
        """Bag ids on the tree path from ``src`` to ``dst`` inclusive."""
        nb = self.neighbors()
        prev = {src: src}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        if dst not in prev:
            raise DecompositionError(f"bags {src} and {dst} are not connected")
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        return path[::-1]


def _check_ref(g: MulticoloredGraph, td: TreeDecomposition) -> None:
    if td.ref is None:
        return
    mine = graph_ref(g)
    if td.ref.n != mine.n or (td.ref.m is not None and td.ref.m != mine.m) or (
        td.ref.digest is not None and td.ref.digest != mine.digest
    ):
        raise DecompositionError("decomposition does not belong to this graph")


def _is_tree(num_nodes: int, edges: frozenset[Edge]) -> bool:
    if num_nodes == 0:
        return False
    if len(edges) != num_nodes - 1:
        return False
    parent = list(range(num_nodes))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if not (0 <= a < num_nodes and 0 <= b < num_nodes):
            return False
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def first_violation(g: MulticoloredGraph, td: TreeDecomposition) -> Optional[str]:
    """Describe the first broken decomposition condition, or ``None``."""
    _check_ref(g, td)
    if not _is_tree(len(td.bags), td.tree_edges):
        return "bag graph is not a tree"
    where: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                return f"bag {i} holds unknown vertex {v}"
            where[v].append(i)
    for v in range(g.n):
        if not where[v]:
            return f"vertex {v} is in no bag"
    for u, v in sorted(g.edges):
        if not any(v in td.bags[i] for i in where[u]):
            return f"edge {u}-{v} is in no bag"
    nb = td.neighbors()
    for v in range(g.n):
        holders = set(where[v])
        start = where[v][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(holders):
            return f"bags holding vertex {v} are not connected"
    return None


def verify_tree_decomposition(g: MulticoloredGraph, td: TreeDecomposition) -> bool:
    return first_violation(g, td) is None


def bag_color_clash(g: MulticoloredGraph, bag: Iterable[int]) -> Optional[int]:
    """A color carried by two members of ``bag``, if any."""
    acc = 0
    for v in bag:
        m = g.masks[v]
        if acc & m:
            return (acc & m).bit_length() - 1
        acc |= m
    return None


def color_multiplicity_ok(g: MulticoloredGraph, td: TreeDecomposition, mode: str = "at-most-once") -> bool:
    if mode not in ("at-most-once", "exactly-once"):
        raise ValueError(f"unknown multiplicity mode {mode!r}")
    full = (1 << g.num_colors) - 1
    for bag in td.bags:
        acc = 0
        for v in bag:
            m = g.masks[v]
            if acc & m:
                return False
            acc |= m
        if mode == "exactly-once" and acc != full:
            return False
    return True


def normalize_exactly_once(g: MulticoloredGraph, td: TreeDecomposition) -> TreeDecomposition:
    """Pad bags until each holds every color exactly once.

    For each color, the bags already holding it seed a breadth-first sweep
    over the bag tree; a bag lacking the color receives the carrier vertex
    of the neighbouring bag it was reached from.  Vertices are only ever
    added, and a vertex's bag set grows by adjacent bags, so the result
    remains a decomposition.
    """
    missing = set(range(g.num_colors)) - g.used_colors
    if missing:
        raise DecompositionError(f"colors {sorted(missing)} appear nowhere in the graph")
    if not color_multiplicity_ok(g, td, "at-most-once"):
        raise DecompositionError("a bag already holds some color twice")
    bags = [set(b) for b in td.bags]
    nb = td.neighbors()
    for c in range(g.num_colors):
        bit = 1 << c
        carrier: dict[int, int] = {}
        for i, bag in enumerate(bags):
            for v in bag:
                if g.masks[v] & bit:
                    carrier[i] = v
        queue = deque(sorted(carrier))
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y not in carrier:
                    v = carrier[x]
                    if any(g.masks[w] & g.masks[v] for w in bags[y]):
                        # v carries other colors this bag already has
                        raise DecompositionError(
                            f"cannot add vertex {v} to bag {y} without a color clash"
                        )
                    bags[y].add(v)
                    carrier[y] = v
                    queue.append(y)
    return TreeDecomposition(tuple(frozenset(b) for b in bags), td.tree_edges, td.ref)


def merge_equal_bags(td: TreeDecomposition) -> TreeDecomposition:
    """Contract every tree edge whose two bags are equal."""
    root = list(range(len(td.bags)))

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for a, b in sorted(td.tree_edges):
        if td.bags[a] == td.bags[b]:
            root[find(b)] = find(a)
    keep = sorted({find(i) for i in range(len(td.bags))})
    new_id = {old: i for i, old in enumerate(keep)}
    edges = {norm_edge(new_id[find(a)], new_id[find(b)]) for a, b in td.tree_edges
             if find(a) != find(b)}
    return TreeDecomposition(tuple(td.bags[i] for i in keep), frozenset(edges), td.ref)


def treedecomp_to_triangulation(g: MulticoloredGraph, td: TreeDecomposition) -> frozenset[Edge]:
    fill = set()
    for bag in td.bags:
        members = sorted(bag)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                e = (u, v)
                if e not in g.edges:
                    fill.add(e)
    return frozenset(fill)


def maximal_cliques_chordal(h: MulticoloredGraph) -> list[frozenset[int]]:
    order = mcs_order(h)
    pos = {v: i for i, v in enumerate(order)}
    cands = []
    for v in order:
        cands.append(frozenset([v, *(w for w in h.adj[v] if pos[w] < pos[v])]))
    cands.sort(key=lambda c: (-len(c), sorted(c)))
    out: list[frozenset[int]] = []
    for c in cands:
        if not any(c <= d for d in out):
            out.append(c)
    out.sort(key=sorted)
    return out


def clique_tree(cliques: list[frozenset[int]]) -> list[Edge]:
    """Maximum-intersection spanning tree (Prim, ties to the smallest ids)."""
    if not cliques:
        return []
    in_tree = [False] * len(cliques)
    best = [(-1, -1)] * len(cliques)  # (weight, partner)
    in_tree[0] = True
    for j in range(1, len(cliques)):
        best[j] = (len(cliques[0] & cliques[j]), 0)
    edges = []
    for _ in range(len(cliques) - 1):
        pick = -1
        for j in range(len(cliques)):
            if not in_tree[j] and (pick < 0 or best[j][0] > best[pick][0]):
                pick = j
        in_tree[pick] = True
        edges.append(norm_edge(pick, best[pick][1]))
        for j in range(len(cliques)):
            if not in_tree[j]:
                w = len(cliques[pick] & cliques[j])
                if w > best[j][0]:
                    best[j] = (w, pick)
    return edges


def triangulation_to_treedecomp(g: MulticoloredGraph, fill: Iterable[Edge]) -> TreeDecomposition:
    fill = frozenset(fill)
    try:
        ok = verify_triangulation(g, fill)
    except GraphError as exc:
        raise DecompositionError(str(exc)) from exc
    if not ok:
        raise DecompositionError("fill does not give a properly colored chordal supergraph")
    h = g.with_edges(fill)
    cliques = maximal_cliques_chordal(h)
    return TreeDecomposition(tuple(cliques), frozenset(clique_tree(cliques)), graph_ref(g))

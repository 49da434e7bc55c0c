"""Exact solver for properly colored triangulation.

The search follows the alternating-machine membership argument, run
deterministically.  A state is a bag ``S`` holding one vertex per color and
a component ``C`` of ``G - S`` still to be covered.  The machine guesses a
vertex ``v`` in ``C``, swaps it for the vertex ``w`` of ``S`` with the same
color (rejecting if ``w`` touches ``C``), and then must succeed on every
component of the new ``G - S`` inside ``C``.

``w`` may leave only when it has no neighbour in ``C``, so the bag slots
that matter are exactly the neighbours ``N(C)``; the remaining slots are
placeholders.  The outcome of a state is therefore a function of ``C``
alone, which is what the memo table is keyed on, and the guess reduces to
"some ``v`` in ``C`` whose color is absent from ``N(C)``".  The top level
starts from each connected component of ``G`` with an empty separator.
Successful states emit the bag ``N(C) + {v}`` linked to their parent's bag.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .graph import GraphError, MulticoloredGraph, components_after_removal
from .treedecomp import TreeDecomposition, graph_ref, merge_equal_bags, normalize_exactly_once


class SolverTimeout(RuntimeError):
    pass


@dataclass
class SearchNode:
    """One accepted state: component ``C``, its separator, and the guessed vertex."""

    component: frozenset[int]
    separator: frozenset[int]
    chosen: int
    children: list["SearchNode"] = field(default_factory=list)

    @property
    def bag(self) -> frozenset[int]:
        return self.separator | {self.chosen}


class _Search:
    def __init__(self, g: MulticoloredGraph, memo: bool, deadline: Optional[float]):
        self.g = g
        self.memo: Optional[dict[frozenset[int], Optional[SearchNode]]] = {} if memo else None
        self.deadline = deadline
        self.calls = 0

    def _tick(self) -> None:
        self.calls += 1
        if self.deadline is not None and self.calls % 256 == 1 and time.monotonic() > self.deadline:
            raise SolverTimeout("time budget exhausted")

    def _split(self, comp: frozenset[int], v: int) -> list[frozenset[int]]:
        adj = self.g.adj
        rest = set(comp)
        rest.discard(v)
        out = []
        for s in sorted(rest):
            if s not in rest:
                continue
            rest.discard(s)
            part = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in rest:
                        rest.discard(y)
                        part.append(y)
                        stack.append(y)
            out.append(frozenset(part))
        return out

    def solve(self, comp: frozenset[int]) -> Optional[SearchNode]:
        if self.memo is not None and comp in self.memo:
            return self.memo[comp]
        self._tick()
        g = self.g
        sep = set()
        for x in comp:
            sep |= g.adj[x]
        sep -= comp
        sep_mask = 0
        for x in sep:
            sep_mask |= g.masks[x]
        result = None
        for v in sorted(comp):
            if g.masks[v] & sep_mask:
                continue  # the same-colored bag vertex touches comp: reject
            children = []
            for part in self._split(comp, v):
                child = self.solve(part)
                if child is None:
                    break
                children.append(child)
            else:
                result = SearchNode(comp, frozenset(sep), v, children)
                break
        if self.memo is not None:
            self.memo[comp] = result
        return result


def _emit(g: MulticoloredGraph, roots: list[SearchNode]) -> TreeDecomposition:
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    stack: list[tuple[SearchNode, int]] = []
    prev_root = -1
    for r in roots:
        bags.append(r.bag)
        rid = len(bags) - 1
        if prev_root >= 0:
            edges.append((prev_root, rid))
        prev_root = rid
        stack.append((r, rid))
        while stack:
            node, nid = stack.pop()
            for ch in node.children:
                bags.append(ch.bag)
                cid = len(bags) - 1
                edges.append((nid, cid))
                stack.append((ch, cid))
    return TreeDecomposition.make(bags, edges, g)


def _validate_tcg(g: MulticoloredGraph) -> None:
    for v in g.vertices:
        m = g.masks[v]
        if m == 0 or m & (m - 1):
            raise GraphError(f"vertex {v} must carry exactly one color")
    missing = set(range(g.num_colors)) - g.used_colors
    if missing:
        raise GraphError(f"colors {sorted(missing)} are declared but unused")


def search_tcg(g: MulticoloredGraph, memo: bool = True,
               timeout_ms: Optional[float] = None) -> Optional[list[SearchNode]]:
    """Run the search and return the accepted root states, or ``None``."""
    deadline = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000.0
    search = _Search(g, memo, deadline)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * g.n + 1000))
    try:
        roots = []
        for comp in components_after_removal(g, ()):
            node = search.solve(comp)
            if node is None:
                return None
            roots.append(node)
        return roots
    finally:
        sys.setrecursionlimit(limit)


def solve_tcg(g: MulticoloredGraph, memo: bool = True,
              timeout_ms: Optional[float] = None) -> Optional[TreeDecomposition]:
    """Exactly-once tree decomposition of a colored graph, or ``None`` if none exists.

    Raises ``SolverTimeout`` when ``timeout_ms`` elapses first.
    """
    _validate_tcg(g)
    if g.n == 0:
        return TreeDecomposition.make([()], [], g)
    roots = search_tcg(g, memo, timeout_ms)
    if roots is None:
        return None
    return merge_equal_bags(normalize_exactly_once(g, _emit(g, roots)))


def solve_tmg(g: MulticoloredGraph, memo: bool = True,
              timeout_ms: Optional[float] = None) -> Optional[TreeDecomposition]:
    """At-most-once decomposition of a multicolored graph via the clique expansion."""
    from .graph import compact_colors
    from .reductions.multicolor import lift_tcg_decomposition_to_tmg, reduce_tmg_to_tcg

    dense, _ = compact_colors(g)  # allocated but unused palette slots
    expanded, prov = reduce_tmg_to_tcg(dense)
    td = solve_tcg(expanded, memo, timeout_ms)
    if td is None:
        return None
    lifted = lift_tcg_decomposition_to_tmg(dense, td, prov)
    return TreeDecomposition(lifted.bags, lifted.tree_edges, graph_ref(g))


def solve_pp(inst, memo: bool = True, timeout_ms: Optional[float] = None):
    """A perfect phylogeny for ``inst`` or ``None``."""
    from .reductions.phylogeny import extract_phylogeny, reduce_pp_to_tcg

    g, prov = reduce_pp_to_tcg(inst)
    td = solve_tcg(g, memo, timeout_ms)
    if td is None:
        return None
    return extract_phylogeny(inst, td, prov)

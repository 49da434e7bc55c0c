"""Multicolored graphs, chordality, and triangulation checks.

Vertices are dense integer ids ``0..n-1``.  Each vertex carries a set of
color ids stored as an integer bitmask.  A graph in ``tcg`` mode has exactly
one color per vertex; ``tmg`` mode allows any number (including zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional


class GraphError(ValueError):
    """Raised for malformed graphs or inputs violating a precondition."""


Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        if c < 0:
            raise GraphError(f"negative color id {c}")
        m |= 1 << c
    return m


def colors_of_mask(mask: int) -> list[int]:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


@dataclass(frozen=True)
class MulticoloredGraph:
    """Immutable undirected graph whose vertices carry color sets.

    ``num_colors`` is the size of the declared palette; every color id used
    must be below it.  Reductions may allocate palette slots that end up
    unused, so the parameter ``k`` is recomputed from the vertices.
    """

    n: int
    masks: tuple[int, ...]
    edges: frozenset[Edge]
    mode: str = "tmg"
    num_colors: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.mode not in ("tcg", "tmg"):
            raise GraphError(f"unknown graph mode {self.mode!r}")
        if len(self.masks) != self.n:
            raise GraphError("one color mask per vertex required")
        used = 0
        for m in self.masks:
            used |= m
        if self.num_colors < 0:
            object.__setattr__(self, "num_colors", used.bit_length())
        elif used.bit_length() > self.num_colors:
            raise GraphError(
                f"color id {used.bit_length() - 1} out of range for {self.num_colors} colors"
            )
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"bad edge ({u}, {v})")
        if self.mode == "tcg":
            for v, m in enumerate(self.masks):
                if m == 0 or m & (m - 1):
                    raise GraphError(f"tcg vertex {v} must have exactly one color")

    @classmethod
    def build(
        cls,
        colors: Iterable[Iterable[int]],
        edges: Iterable[tuple[int, int]],
        mode: str = "tmg",
        num_colors: int = -1,
    ) -> "MulticoloredGraph":
        masks = tuple(mask_of(cs) for cs in colors)
        es = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            es.add(norm_edge(u, v))
        return cls(len(masks), masks, frozenset(es), mode, num_colors)

    @classmethod
    def colored(cls, colors: Iterable[int], edges: Iterable[tuple[int, int]]) -> "MulticoloredGraph":
        """Shorthand for a tcg-mode graph with one color per vertex."""
        return cls.build([[c] for c in colors], edges, mode="tcg")

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def colors(self, v: int) -> frozenset[int]:
        return frozenset(colors_of_mask(self.masks[v]))

    def color(self, v: int) -> int:
        """The single color of ``v`` (tcg graphs only)."""
        m = self.masks[v]
        if m == 0 or m & (m - 1):
            raise GraphError(f"vertex {v} does not have exactly one color")
        return m.bit_length() - 1

    @cached_property
    def used_colors(self) -> frozenset[int]:
        used = 0
        for m in self.masks:
            used |= m
        return frozenset(colors_of_mask(used))

    @property
    def k(self) -> int:
        return len(self.used_colors)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def with_edges(self, extra: Iterable[Edge]) -> "MulticoloredGraph":
        return MulticoloredGraph(
            self.n, self.masks, self.edges | {norm_edge(u, v) for u, v in extra},
            self.mode, self.num_colors,
        )

    def induced(self, keep: Iterable[int]) -> tuple["MulticoloredGraph", list[int]]:
        """Induced subgraph on ``keep`` (relabelled densely) and the old ids."""
        old = sorted(set(keep))
        new_id = {v: i for i, v in enumerate(old)}
        edges = [(new_id[u], new_id[v]) for u, v in self.edges if u in new_id and v in new_id]
        g = MulticoloredGraph(
            len(old), tuple(self.masks[v] for v in old),
            frozenset(norm_edge(u, v) for u, v in edges), self.mode, self.num_colors,
        )
        return g, old


def compact_colors(g: MulticoloredGraph) -> tuple[MulticoloredGraph, list[int]]:
    """Renumber the used colors densely; also returns new id -> old id."""
    old = sorted(g.used_colors)
    new_id = {c: i for i, c in enumerate(old)}
    masks = tuple(mask_of(new_id[c] for c in colors_of_mask(m)) for m in g.masks)
    return MulticoloredGraph(g.n, masks, g.edges, g.mode, len(old)), old


def is_properly_multicolored(g: MulticoloredGraph) -> bool:
    return all(not (g.masks[u] & g.masks[v]) for u, v in g.edges)


def mcs_order(g: MulticoloredGraph) -> list[int]:
    """Maximum cardinality search; returns vertices in visit order.

    Ties go to the smallest id.
    """
    weight = [0] * g.n
    visited = [False] * g.n
    order = []
    for _ in range(g.n):
        best = -1
        for v in range(g.n):
            if not visited[v] and (best < 0 or weight[v] > weight[best]):
                best = v
        visited[best] = True
        order.append(best)
        for w in g.adj[best]:
            if not visited[w]:
                weight[w] += 1
    return order


def is_chordal(g: MulticoloredGraph) -> bool:
    """Chordality via MCS: the reverse visit order must be a perfect elimination order."""
    order = mcs_order(g)
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in g.adj[v] if pos[w] < pos[v]]
        if not earlier:
            continue
        parent = max(earlier, key=pos.__getitem__)
        for w in earlier:
            if w != parent and w not in g.adj[parent]:
                return False
    return True


def components_after_removal(g: MulticoloredGraph, removed: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of ``g - removed`` ordered by minimum vertex id."""
    gone = set(removed)
    for v in gone:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} not in graph")
    seen = set(gone)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


def check_fill(g: MulticoloredGraph, fill: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for u, v in fill:
        if u == v or not (0 <= u < g.n and 0 <= v < g.n):
            raise GraphError(f"fill pair ({u}, {v}) is not a pair of distinct vertices")
        e = norm_edge(u, v)
        if e in g.edges:
            raise GraphError(f"fill pair {e} is already an edge")
        out.add(e)
    return frozenset(out)


def verify_triangulation(g: MulticoloredGraph, fill: Iterable[Edge]) -> bool:
    """True iff ``g + fill`` is chordal and properly multicolored."""
    h = g.with_edges(check_fill(g, fill))
    return is_properly_multicolored(h) and is_chordal(h)


def fill_violation(g: MulticoloredGraph, fill: Iterable[Edge]) -> Optional[str]:
    """Describe why ``g + fill`` is not a proper triangulation, or ``None``."""
    try:
        h = g.with_edges(check_fill(g, fill))
    except GraphError as exc:
        return str(exc)
    for u, v in sorted(h.edges):
        shared = h.masks[u] & h.masks[v]
        if shared:
            return f"edge {u}-{v} joins two vertices sharing color {shared.bit_length() - 1}"
    order = mcs_order(h)
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in h.adj[v] if pos[w] < pos[v]]
        if earlier:
            parent = max(earlier, key=pos.__getitem__)
            for w in earlier:
                if w != parent and w not in h.adj[parent]:
                    return f"not chordal: {w} and {parent} both precede neighbour {v} but are not adjacent"
    return None


def iter_cycles(g: MulticoloredGraph, min_len: int = 3) -> Iterator[list[int]]:
    """Every simple cycle once, as a vertex list starting at its smallest vertex.

    Exponential; meant for brute-force checks on tiny graphs.
    """
    for start in range(g.n):
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for w in g.adj[v]:
                if w == start and len(path) >= min_len and path[1] < path[-1]:
                    yield list(path)
                elif w > start and w not in path:
                    stack.append((w, path + [w]))

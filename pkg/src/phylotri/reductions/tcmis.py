"""Tree-chained multicolor independent set to multicolored triangulation.

Every (node, color) class becomes one zipper gadget whose offset encodes the
chosen vertex.  A gadget starts at its node, passes through the parent and
ends at the grandparent of a rooted copy of the tree; heads, middles and
tails meeting at a tree node are identified into one vertex.  Each TCMIS
edge merges one P-vertex of the two endpoint gadgets and puts an extra color
``d`` on the two Q-vertices that the merged vertex reaches exactly when both
endpoints are chosen.

Gadgets have skew ``r``.  Edge ``i`` (1-based) owns one P-tooth in the first
half of a gadget and one in the second half; a ``d`` vertex sits ``r`` Q-teeth
or fewer past it, so under offset ``delta`` it meets P-teeth up to ``r`` away
from the edge tooth.  Two layouts are offered:

``paper``
    ``2 m r + 1`` P-teeth, middle ``m r + 1``, edge teeth ``i r`` and
    ``m r + 1 + i r``.
``spaced`` (default)
    stride ``s = r + 1``, middle ``(m + 1) s``, ``2 (m + 1) s`` P-teeth, edge
    teeth ``i s + 1`` and ``middle + i s + 1``.  Every ``d`` window then stays
    clear of the neighbouring edge teeth and of the head, middle and tail,
    so only choosing both endpoints of an edge puts two ``d`` vertices next
    to one shared vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from ..graph import Edge, GraphError, MulticoloredGraph, norm_edge
from ..treedecomp import (
    DecompositionError,
    TreeDecomposition,
    graph_ref,
    treedecomp_to_triangulation,
)
from ..zipper import ZipperColors, ZipperGadget, gadget_vertex_colors, rung_sequence

Vertex = tuple[int, int, int]  # (node, color, index)
ClassKey = tuple[int, int]  # (node, color)
TcmisSolution = dict[ClassKey, int]


@dataclass(frozen=True, eq=False)
class TcmisInstance:
    """Per-node multicolor independent set instances chained along a tree."""

    num_nodes: int
    k: int
    tree_edges: tuple[tuple[int, int], ...]
    class_sizes: dict[ClassKey, int]
    edges: tuple[tuple[Vertex, Vertex], ...] = ()

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise GraphError("a TCMIS instance needs at least one tree node")
        if self.k < 1:
            raise GraphError("k must be positive")
        adj = self.tree_adjacency()
        if len(self.tree_edges) != self.num_nodes - 1:
            raise GraphError("tree edge count does not match node count")
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != self.num_nodes:
            raise GraphError("the tree is not connected")
        for x, nb in enumerate(adj):
            if len(nb) > 3:
                raise GraphError(f"tree node {x} has degree {len(nb)}; the tree must be binary")
        for (node, color), size in self.class_sizes.items():
            if not 0 <= node < self.num_nodes:
                raise GraphError(f"class on unknown node {node}")
            if not 0 <= color < self.k:
                raise GraphError(f"class color {color} outside [0, {self.k})")
            if size < 1:
                raise GraphError(f"class ({node}, {color}) is empty")
        for a, b in self.edges:
            for node, color, idx in (a, b):
                size = self.class_sizes.get((node, color))
                if size is None:
                    raise GraphError(f"edge endpoint in missing class ({node}, {color})")
                if not 0 <= idx < size:
                    raise GraphError(f"edge endpoint index {idx} outside class ({node}, {color})")
            if a[0] == b[0]:
                if a[1] == b[1]:
                    raise GraphError(f"edge {a}-{b} joins two vertices of one color class")
            elif b[0] not in adj[a[0]]:
                raise GraphError(f"edge {a}-{b} joins non-adjacent tree nodes")

    def tree_adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.num_nodes)]
        for a, b in self.tree_edges:
            if not (0 <= a < self.num_nodes and 0 <= b < self.num_nodes) or a == b:
                raise GraphError(f"bad tree edge ({a}, {b})")
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def classes_at(self, node: int) -> list[int]:
        return sorted(c for n, c in self.class_sizes if n == node)

    @property
    def r(self) -> int:
        return max(self.class_sizes.values(), default=1) - 1


@dataclass(frozen=True)
class ReductionConfig:
    layout: str = "spaced"  # or "paper"

    def __post_init__(self) -> None:
        if self.layout not in ("spaced", "paper"):
            raise GraphError(f"unknown gadget layout {self.layout!r}")


@dataclass(frozen=True)
class Merge:
    edge: int  # 1-based
    first: ClassKey
    second: ClassKey
    vertex: int
    d_vertices: tuple[int, int]


@dataclass(eq=False)
class TcmisProvenance:
    padded: TcmisInstance
    original: TcmisInstance
    r: int
    m: int
    layout: str
    size: int  # P-teeth per gadget
    middle: int  # middle P-tooth
    first_teeth: tuple[int, ...]  # edge i -> P-tooth in a first half (index i - 1)
    second_teeth: tuple[int, ...]
    root: int  # the node u hung below the new nodes
    parent: dict[int, int]  # rooted tree T' (new nodes get ids num_nodes, num_nodes + 1)
    gadgets: dict[ClassKey, ZipperGadget]
    slots: dict[ClassKey, int]
    hub: dict[int, int]  # T' node -> identified vertex
    merges: list[Merge]
    d_color: int
    colors_allocated: int
    coords: list[list[tuple]] = field(default_factory=list)

    @property
    def colors_occupied(self) -> int:
        used = {c for s in self.slots.values() for c in ZipperColors.slot(s).ids()}
        if self.merges:
            used.add(self.d_color)
        return len(used)

    def children(self, x: int) -> list[int]:
        return sorted(c for c, p in self.parent.items() if p == x)


def pad_instance(inst: TcmisInstance, size: int) -> TcmisInstance:
    """Grow every class to ``size`` with vertices that are never selectable.

    A pad is joined to every vertex of the other classes in its node; in a
    single-class node it is joined to a neighbouring node's vertices instead.
    Original indices are kept, pads come after them, and pad edges follow
    the original edges.
    """
    adj = inst.tree_adjacency()
    new_edges = list(inst.edges)
    seen = {frozenset(e) for e in inst.edges}

    def add(a: Vertex, b: Vertex) -> None:
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            new_edges.append((a, b))

    sizes = {key: size for key in inst.class_sizes}
    for node in range(inst.num_nodes):
        colors = inst.classes_at(node)
        for c in colors:
            for idx in range(inst.class_sizes[(node, c)], size):
                pad = (node, c, idx)
                others = [(node, c2) for c2 in colors if c2 != c]
                if not others:
                    for nb in sorted(adj[node]):
                        if inst.classes_at(nb):
                            others = [(nb, c2) for c2 in inst.classes_at(nb)][:1]
                            break
                for n2, c2 in others:
                    for j in range(size):
                        add(pad, (n2, c2, j))
    return TcmisInstance(inst.num_nodes, inst.k, inst.tree_edges, sizes, tuple(new_edges))


def _root_tree(inst: TcmisInstance) -> tuple[int, dict[int, int]]:
    adj = inst.tree_adjacency()
    root = 0 if len(adj[0]) <= 2 else min(x for x in range(inst.num_nodes) if len(adj[x]) <= 2)
    v, w = inst.num_nodes, inst.num_nodes + 1
    parent = {root: v, v: w}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return root, parent


def _span(parent: dict[int, int], node: int) -> tuple[int, int, int]:
    p = parent[node]
    return node, p, parent[p]


def _assign_slots(inst: TcmisInstance, parent: dict[int, int], top: int) -> dict[ClassKey, int]:
    depth = {top: 0}

    def dep(x: int) -> int:
        if x not in depth:
            depth[x] = dep(parent[x]) + 1
        return depth[x]

    order = sorted(range(inst.num_nodes), key=lambda x: (dep(x), x))
    slots: dict[ClassKey, int] = {}
    for node in order:
        mine = set(_span(parent, node))
        used = {s for (n2, _), s in slots.items() if mine & set(_span(parent, n2))}
        free = (s for s in range(7 * inst.k) if s not in used)
        for c in inst.classes_at(node):
            try:
                slots[(node, c)] = next(free)
            except StopIteration:
                raise GraphError("ran out of color slots; is the tree binary?") from None
    return slots


def reduce_tcmis_to_tmg(inst: TcmisInstance, config: ReductionConfig = ReductionConfig()
                        ) -> tuple[MulticoloredGraph, TcmisProvenance]:
    r = inst.r
    if inst.edges and r == 0:
        r = 1  # a zero skew leaves no room to encode a conflict
    padded = pad_instance(inst, r + 1)
    m = len(padded.edges)
    if config.layout == "paper":
        middle = m * r + 1
        size = 2 * m * r + 1
        first = tuple(i * r for i in range(1, m + 1))
    else:
        stride = r + 1
        middle = (m + 1) * stride
        size = 2 * middle
        first = tuple(i * stride + 1 for i in range(1, m + 1))
    second = tuple(middle + t for t in first)
    root, parent = _root_tree(padded)
    top = padded.num_nodes + 1
    slots = _assign_slots(padded, parent, top)
    d_color = 49 * inst.k

    # which gadget P positions (extended index) are identified, and with what
    merge_key: dict[tuple[ClassKey, int], int] = {}
    d_marks: list[tuple[ClassKey, int]] = []
    plan = []
    for i, (a, b) in enumerate(padded.edges, start=1):
        if a[0] != b[0] and parent.get(a[0]) == b[0]:
            a, b = b, a  # a's node is now the parent (or the same node)
        ka, kb = (a[0], a[1]), (b[0], b[1])
        ta = first[i - 1]
        tb = first[i - 1] if a[0] == b[0] else second[i - 1]
        plan.append((i, ka, kb, 4 * ta - 3, 4 * tb - 3))
        merge_key[(ka, 4 * ta - 3)] = i
        merge_key[(kb, 4 * tb - 3)] = i
        d_marks.append((ka, 4 * (ta + a[2]) - 3))
        d_marks.append((kb, 4 * (tb + b[2]) - 3))

    colors: list[set[int]] = []
    coords: list[list[tuple]] = []

    def fresh(tag: tuple) -> int:
        colors.append(set())
        coords.append([tag])
        return len(colors) - 1

    hub: dict[int, int] = {}
    depth_order = sorted(set(parent) | {top}, key=lambda x: (x != top, x))
    for x in depth_order:
        touches = any(x in _span(parent, n) for n, _ in slots)
        if touches:
            hub[x] = fresh(("hub", x))
    merged_vertex: dict[int, int] = {}

    gadgets: dict[ClassKey, ZipperGadget] = {}
    for key in sorted(slots):
        node, color = key
        pal = ZipperColors.slot(slots[key])
        _, pcols, qcols = gadget_vertex_colors(size, r, pal)
        start, mid, end = _span(parent, node)
        head, tail = hub[start], hub[end]
        colors[head].add(pal.b_p)
        colors[tail].add(pal.b_p)
        coords[head].append((node, color, "head", 0))
        coords[tail].append((node, color, "tail", 4 * size))
        p = []
        for i in range(1, 4 * size):
            if i == 4 * middle:
                v = hub[mid]
                coords[v].append((node, color, "P", i))
            elif (key, i) in merge_key:
                e = merge_key[(key, i)]
                if e in merged_vertex:
                    v = merged_vertex[e]
                    coords[v].append((node, color, "P", i))
                else:
                    v = merged_vertex[e] = fresh((node, color, "P", i))
            else:
                v = fresh((node, color, "P", i))
            colors[v].update(pcols[i - 1])
            p.append(v)
        q = []
        for j in range(1, 4 * (size + r) + 1):
            v = fresh((node, color, "Q", j))
            colors[v].update(qcols[j - 1])
            q.append(v)
        gadgets[key] = ZipperGadget(size, r, head, tail, tuple(p), tuple(q), pal)

    merges = []
    d_vertices = []
    for key, j in d_marks:
        v = gadgets[key].qv(j)
        colors[v].add(d_color)
        d_vertices.append(v)
    for idx, (i, ka, kb, _, _) in enumerate(plan):
        merges.append(Merge(i, ka, kb, merged_vertex[i], (d_vertices[2 * idx], d_vertices[2 * idx + 1])))

    edges: set[Edge] = set()
    for gd in gadgets.values():
        edges.update(gd.base_edges())
    g = MulticoloredGraph.build([sorted(c) for c in colors], edges, mode="tmg",
                                num_colors=49 * inst.k + 1)
    gadgets = {key: ZipperGadget(gd.n, gd.s, gd.head, gd.tail, gd.p, gd.q, gd.palette, g)
               for key, gd in gadgets.items()}
    prov = TcmisProvenance(padded, inst, r, m, config.layout, size, middle, first, second,
                           root, parent, gadgets, slots,
                           hub, merges, d_color, 49 * inst.k + 1, coords)
    return g, prov


# --- witness construction -------------------------------------------------


class BuildError(DecompositionError):
    """No interleaving of gadget slides keeps every bag properly colored."""


@dataclass
class _Track:
    key: ClassKey
    rungs: list[tuple[int, int]]  # vertex pairs
    stops: list[int]  # rung index at entry, each checkpoint, exit


def _rung_vertices(gd: ZipperGadget, delta: int) -> list[tuple[int, int]]:
    return [(gd.pside(i), gd.qv(j)) for i, j in rung_sequence(gd, delta)]


def _index_of(seq: list[tuple[int, int]], rung: tuple[int, int]) -> int:
    return seq.index(rung)


def _half_stops(prov: TcmisProvenance, key: ClassKey, delta: int, second: bool) -> _Track:
    gd = prov.gadgets[key]
    seq = rung_sequence(gd, delta)
    sh = 4 * delta
    if 4 * prov.middle < 4 * prov.size:
        mid_rung = (4 * prov.middle, 4 * prov.middle - 1 + sh)
    else:
        mid_rung = (2, 3 + sh)  # single-tooth gadget: no middle vertex
    mid = _index_of(seq, mid_rung)
    stops = [mid if second else 0]
    for t in (prov.second_teeth if second else prov.first_teeth):
        stops.append(_index_of(seq, (4 * t - 3, 4 * t - 3 + sh)))
    stops.append(len(seq) - 1 if second else mid)
    return _Track(key, _rung_vertices(gd, delta), stops)


class _Slider:
    """Moves a set of gadget tracks one rung at a time, keeping bags proper."""

    def __init__(self, g: MulticoloredGraph, tracks: list[_Track], d_color: int,
                 strict: bool, budget: int):
        self.g = g
        self.tracks = tracks
        self.dbit = 1 << d_color
        self.strict = strict
        self.budget = budget
        self.forced = False

    def _bag(self, pos: tuple[int, ...], mover: int = -1) -> set[int]:
        bag = set()
        for t, p in zip(self.tracks, pos):
            bag.update(t.rungs[p])
        if mover >= 0:
            bag.update(self.tracks[mover].rungs[pos[mover] + 1])
        return bag

    def _proper(self, bag: set[int]) -> bool:
        acc = 0
        for v in bag:
            if acc & self.g.masks[v]:
                return False
            acc |= self.g.masks[v]
        return True

    def _has_d(self, rung: tuple[int, int]) -> bool:
        return any(self.g.masks[v] & self.dbit for v in rung)

    def _order(self, pos: tuple[int, ...], target: tuple[int, ...]) -> list[int]:
        cands = [i for i in range(len(pos)) if pos[i] < target[i]]

        def prio(i: int) -> tuple[int, int]:
            t = self.tracks[i]
            if self._has_d(t.rungs[pos[i]]):
                return (0, i)
            if self._has_d(t.rungs[target[i]]):
                return (2, i)
            return (1, i)

        return sorted(cands, key=prio)

    def run(self, start: tuple[int, ...], target: tuple[int, ...]) -> list[set[int]]:
        """Bags of one interval; raises ``BuildError`` unless ``strict`` is off."""
        dead: set[tuple[int, ...]] = set()
        path: list[int] = []
        expanded = 0

        def go(pos: tuple[int, ...]) -> bool:
            nonlocal expanded
            if pos == target:
                return True
            if pos in dead:
                return False
            expanded += 1
            if expanded > self.budget:
                raise BuildError("slide search budget exhausted")
            for i in self._order(pos, target):
                if not self._proper(self._bag(pos, i)):
                    continue
                path.append(i)
                nxt = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
                if go(nxt):
                    return True
                path.pop()
            dead.add(pos)
            return False

        if not go(start):
            if self.strict:
                raise BuildError("gadget slides deadlock: some bag must repeat a color")
            self.forced = True
            path = []
            pos = start
            while pos != target:
                i = self._order(pos, target)[0]
                path.append(i)
                pos = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
        bags = []
        pos = start
        for i in path:
            bags.append(self._bag(pos, i))
            pos = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
        return bags


def build_tmg_decomposition_from_offsets(g: MulticoloredGraph, prov: TcmisProvenance,
                                         offsets: dict[ClassKey, int], strict: bool = True,
                                         budget: int = 200_000) -> TreeDecomposition:
    """Tree decomposition following the offset triangulation of every gadget.

    One hub bag per rooted-tree node holds the identified vertex and each
    incident gadget's boundary rung.  Between a node and its parent, the
    gadgets of that segment slide rung by rung from checkpoint to
    checkpoint (one checkpoint per TCMIS edge).  With ``strict`` off a
    deadlock is pushed through anyway, leaving an improperly colored bag
    for the verifier to reject.
    """
    for key in prov.gadgets:
        if not 0 <= offsets.get(key, -1) <= prov.r:
            raise DecompositionError(f"offset for gadget {key} missing or outside [0, {prov.r}]")
    bags: list[frozenset[int]] = []
    tree: list[tuple[int, int]] = []
    hub_bag: dict[int, int] = {}
    nodes = sorted(set(prov.parent) | set(prov.parent.values()))
    for x in nodes:
        bag = {prov.hub[x]} if x in prov.hub else set()
        for key, gd in sorted(prov.gadgets.items()):
            start, mid, end = _span(prov.parent, key[0])
            seq = None
            if x == start:
                seq = _half_stops(prov, key, offsets[key], False)
                bag.update(seq.rungs[seq.stops[0]])
            if x == mid:
                seq = _half_stops(prov, key, offsets[key], True)
                bag.update(seq.rungs[seq.stops[0]])
            if x == end:
                seq = _half_stops(prov, key, offsets[key], True)
                bag.update(seq.rungs[seq.stops[-1]])
        hub_bag[x] = len(bags)
        bags.append(frozenset(bag))

    for x in nodes:
        if x not in prov.parent:
            continue
        tracks = [_half_stops(prov, key, offsets[key], False) for key in sorted(prov.gadgets)
                  if key[0] == x]
        tracks += [_half_stops(prov, key, offsets[key], True) for key in sorted(prov.gadgets)
                   if prov.parent.get(key[0]) == x]
        if not tracks:
            tree.append((hub_bag[x], hub_bag[prov.parent[x]]))
            continue
        slider = _Slider(g, tracks, prov.d_color, strict, budget)
        prev = hub_bag[x]
        for j in range(len(tracks[0].stops) - 1):
            start = tuple(t.stops[j] for t in tracks)
            target = tuple(t.stops[j + 1] for t in tracks)
            for bag in slider.run(start, target):
                bags.append(frozenset(bag))
                tree.append((prev, len(bags) - 1))
                prev = len(bags) - 1
        tree.append((prev, hub_bag[prov.parent[x]]))
    return TreeDecomposition.make(bags, tree, g)


def build_tmg_decomposition_from_tcmis_solution(inst: TcmisInstance, solution: TcmisSolution,
                                                reduced: MulticoloredGraph,
                                                prov: TcmisProvenance) -> TreeDecomposition:
    from ..oracles import verify_tcmis_solution

    if not verify_tcmis_solution(inst, solution):
        raise DecompositionError("solution is not a valid TCMIS solution")
    offsets = dict(solution)
    for key in prov.gadgets:
        offsets.setdefault(key, 0)
    return build_tmg_decomposition_from_offsets(reduced, prov, offsets)


def gadget_offsets(reduced: MulticoloredGraph, prov: TcmisProvenance,
                   witness: Union[TreeDecomposition, frozenset, set, list]) -> dict[ClassKey, int]:
    from ..zipper import read_gadget_offset

    if isinstance(witness, TreeDecomposition):
        fill = treedecomp_to_triangulation(reduced, witness)
    else:
        fill = frozenset(norm_edge(u, v) for u, v in witness)
    out = {}
    for key, gd in sorted(prov.gadgets.items()):
        try:
            out[key] = read_gadget_offset(gd, fill)
        except GraphError as exc:
            raise DecompositionError(f"gadget {key}: {exc}") from exc
    return out


def extract_tcmis_solution(inst: TcmisInstance, reduced: MulticoloredGraph, prov: TcmisProvenance,
                           witness) -> TcmisSolution:
    """Read each gadget's offset back as the chosen vertex index.

    A pad can only be read back for a class nothing constrains; such a
    choice is replaced by the first original vertex that keeps the
    solution valid.
    """
    from ..oracles import verify_tcmis_solution

    sol = gadget_offsets(reduced, prov, witness)

    def clean(trial: TcmisSolution) -> bool:
        return not any(trial[a[:2]] == a[2] and trial[b[:2]] == b[2] for a, b in inst.edges)

    for key in sorted(sol):
        if sol[key] >= inst.class_sizes[key]:
            for idx in range(inst.class_sizes[key]):
                if clean({**sol, key: idx}):
                    sol[key] = idx
                    break
            else:
                raise DecompositionError(f"class {key} reads back as a pad vertex")
    if not verify_tcmis_solution(inst, sol):
        raise DecompositionError("read-back offsets do not form a valid TCMIS solution")
    return sol


def two_gadget_mechanism(r: int, i1: int, i2: int, same_node: bool = True,
                         config: ReductionConfig = ReductionConfig()
                         ) -> tuple[TcmisInstance, MulticoloredGraph, TcmisProvenance]:
    """Smallest reduced graph holding one merged gadget pair for edge ``(i1, i2)``."""
    if same_node:
        inst = TcmisInstance(1, 2, (), {(0, 0): r + 1, (0, 1): r + 1}, (((0, 0, i1), (0, 1, i2)),))
    else:
        inst = TcmisInstance(2, 1, ((0, 1),), {(0, 0): r + 1, (1, 0): r + 1},
                             (((0, 0, i1), (1, 0, i2)),))
    g, prov = reduce_tcmis_to_tmg(inst, config)
    return inst, g, prov


def offset_pair_valid(g: MulticoloredGraph, prov: TcmisProvenance,
                      offsets: dict[ClassKey, int]) -> bool:
    """Whether the extended offset triangulation is a valid witness."""
    from ..graph import verify_triangulation
    from ..treedecomp import color_multiplicity_ok, verify_tree_decomposition

    td = build_tmg_decomposition_from_offsets(g, prov, offsets, strict=False)
    if not (verify_tree_decomposition(g, td) and color_multiplicity_ok(g, td)):
        return False
    return verify_triangulation(g, treedecomp_to_triangulation(g, td))


def mechanism_check(r: int, same_node: bool = True,
                    config: ReductionConfig = ReductionConfig()) -> dict[tuple, bool]:
    """Validity of every offset pair for every forbidden pair, keyed ``(i1, i2, d1, d2)``."""
    out = {}
    for i1 in range(r + 1):
        for i2 in range(r + 1):
            _, g, prov = two_gadget_mechanism(r, i1, i2, same_node, config)
            k1, k2 = sorted(prov.gadgets)
            for d1 in range(r + 1):
                for d2 in range(r + 1):
                    out[(i1, i2, d1, d2)] = offset_pair_valid(g, prov, {k1: d1, k2: d2})
    return out

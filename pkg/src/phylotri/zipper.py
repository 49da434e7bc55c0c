"""Zipper chains and zipper gadgets.

A zipper chain is a pair of paths ``P = p1, p2, ...`` and ``Q = q1, q2, ...``
colored from seven colors ``a, bP, bQ, c1..c4`` with period four (a tooth):

    P: a c1, bP c2, a c3, bP c4, ...
    Q: bQ c3, a c4, bQ c1, a c2, ...

A gadget of size ``n`` and skew ``s`` has ``|P| = 4n - 1`` and
``|Q| = 4(n + s)`` and is closed into one cycle by a head and a tail that
carry only ``bP``.  Its properly colored triangulations are indexed by the
offset ``0 <= delta <= s`` at which the P-teeth lock onto the Q-teeth.

Indexing: ``p_i`` and ``q_j`` are 1-based, teeth are 1-based, offsets are
0-based.  Internally the extended P-side runs ``0 = head, 1..4n-1, 4n = tail``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import Edge, GraphError, MulticoloredGraph, norm_edge


@dataclass(frozen=True)
class ZipperColors:
    a: int = 0
    b_p: int = 1
    b_q: int = 2
    c: tuple[int, int, int, int] = (3, 4, 5, 6)

    @classmethod
    def slot(cls, index: int) -> "ZipperColors":
        """The ``index``-th block of seven consecutive color ids."""
        base = 7 * index
        return cls(base, base + 1, base + 2, (base + 3, base + 4, base + 5, base + 6))

    def ids(self) -> tuple[int, ...]:
        return (self.a, self.b_p, self.b_q, *self.c)

    def p_colors(self, i: int) -> tuple[int, int]:
        return (self.a if i % 2 == 1 else self.b_p, self.c[(i - 1) % 4])

    def q_colors(self, j: int) -> tuple[int, int]:
        return (self.a if j % 2 == 0 else self.b_q, self.c[(j + 1) % 4])


@dataclass(frozen=True)
class ZipperChain:
    p: tuple[int, ...]
    q: tuple[int, ...]
    palette: ZipperColors
    graph: MulticoloredGraph


def build_zipper_chain(teeth_p: int, teeth_q: int,
                       palette: ZipperColors = ZipperColors()) -> ZipperChain:
    if teeth_p < 1 or teeth_q < 1:
        raise GraphError("a zipper chain needs at least one tooth on each path")
    lp, lq = 4 * teeth_p, 4 * teeth_q
    colors = [palette.p_colors(i) for i in range(1, lp + 1)]
    colors += [palette.q_colors(j) for j in range(1, lq + 1)]
    edges = [(i, i + 1) for i in range(lp - 1)]
    edges += [(lp + j, lp + j + 1) for j in range(lq - 1)]
    g = MulticoloredGraph.build(colors, edges, num_colors=max(palette.ids()) + 1)
    return ZipperChain(tuple(range(lp)), tuple(range(lp, lp + lq)), palette, g)


@dataclass(frozen=True)
class ZipperGadget:
    """Structural handles of a gadget, in the vertex ids of its host graph."""

    n: int
    s: int
    head: int
    tail: int
    p: tuple[int, ...]
    q: tuple[int, ...]
    palette: ZipperColors = ZipperColors()
    graph: Optional[MulticoloredGraph] = field(default=None, compare=False)

    @property
    def middle(self) -> int:
        """Tooth index of the middle P-tooth used by the reductions."""
        return (self.n + 1) // 2

    def pside(self, i: int) -> int:
        """Vertex at extended P-index ``i`` (0 = head, 4n = tail)."""
        if i == 0:
            return self.head
        if i == 4 * self.n:
            return self.tail
        return self.p[i - 1]

    def qv(self, j: int) -> int:
        return self.q[j - 1]

    def p_tooth(self, t: int) -> list[int]:
        return [self.p[i - 1] for i in range(4 * t - 3, 4 * t + 1) if i <= len(self.p)]

    def q_tooth(self, u: int) -> list[int]:
        return [self.q[j - 1] for j in range(4 * u - 3, 4 * u + 1)]

    def vertices(self) -> list[int]:
        return [self.head, *self.p, self.tail, *self.q]

    def base_edges(self) -> list[Edge]:
        cyc = [self.head, *self.p, self.tail, *reversed(self.q)]
        return [norm_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


def gadget_vertex_colors(n: int, s: int, palette: ZipperColors) -> tuple[list, list, list]:
    """Color sets for (head/tail, P, Q) of a gadget."""
    p = [palette.p_colors(i) for i in range(1, 4 * n)]
    q = [palette.q_colors(j) for j in range(1, 4 * (n + s) + 1)]
    return [(palette.b_p,)], p, q


def build_zipper_gadget(n: int, s: int, palette: ZipperColors = ZipperColors()) -> ZipperGadget:
    """Standalone gadget: head 0, P at 1..4n-1, tail 4n, then Q."""
    if n < 1 or s < 0:
        raise GraphError(f"invalid gadget size/skew ({n}, {s})")
    _, pcols, qcols = gadget_vertex_colors(n, s, palette)
    head, tail = 0, 4 * n
    p = tuple(range(1, 4 * n))
    q = tuple(range(4 * n + 1, 4 * n + 1 + 4 * (n + s)))
    colors = [[palette.b_p], *pcols, [palette.b_p], *qcols]
    gd = ZipperGadget(n, s, head, tail, p, q, palette)
    g = MulticoloredGraph.build(colors, gd.base_edges(), num_colors=max(palette.ids()) + 1)
    return ZipperGadget(n, s, head, tail, p, q, palette, g)


def rung_sequence(gdt: ZipperGadget, delta: int) -> list[tuple[int, int]]:
    """P-Q rungs of the offset-``delta`` triangulation, head to tail.

    Rungs are ``(extended P index, Q index)``; consecutive rungs share an
    endpoint and together span one triangle.
    """
    if not 0 <= delta <= gdt.s:
        raise GraphError(f"offset {delta} outside [0, {gdt.s}]")
    n, lq, sh = gdt.n, 4 * (gdt.n + gdt.s), 4 * delta
    rungs = [(0, j) for j in range(1, sh + 2)]
    for i in range(1, 4 * n):
        if i % 2:
            rungs.append((i, i + sh))
        else:
            rungs.extend((i, j) for j in range(i - 1 + sh, i + 2 + sh))
    rungs.extend((4 * n, j) for j in range(4 * n - 1 + sh, lq + 1))
    return rungs


def canonical_gadget_triangulation(gdt: ZipperGadget, delta: int) -> frozenset[Edge]:
    """Fill edges of the triangulation locking P-tooth ``i`` to Q-tooth ``i + delta``.

    The head fans over the first ``delta`` Q-teeth, a ladder zips each
    P-tooth to its partner (with one overlap rung into the next Q-tooth),
    and the tail fans over what is left of Q.
    """
    base = set(gdt.base_edges())
    fill = set()
    for i, j in rung_sequence(gdt, delta):
        e = norm_edge(gdt.pside(i), gdt.qv(j))
        if e not in base:
            fill.add(e)
    return frozenset(fill)


def enumerate_gadget_triangulations(gdt: ZipperGadget) -> list[frozenset[Edge]]:
    return [canonical_gadget_triangulation(gdt, d) for d in range(gdt.s + 1)]


def _edge_lookup(gdt: ZipperGadget, fill: Iterable[Edge]) -> set[Edge]:
    return set(gdt.base_edges()) | {norm_edge(u, v) for u, v in fill}


def locked_teeth(gdt: ZipperGadget, fill: Iterable[Edge]) -> set[tuple[int, int]]:
    """Pairs (P-tooth, Q-tooth) joined by an edge with an ``a``-colored endpoint."""
    edges = _edge_lookup(gdt, fill)
    out = set()
    for i, pv in enumerate(gdt.p, start=1):
        for j, qv in enumerate(gdt.q, start=1):
            if (i % 2 == 1 or j % 2 == 0) and norm_edge(pv, qv) in edges:
                out.add(((i + 3) // 4, (j + 3) // 4))
    return out


def read_gadget_offset(gdt: ZipperGadget, fill: Iterable[Edge]) -> int:
    partners = sorted(u for t, u in locked_teeth(gdt, fill) if t == 1)
    if not partners:
        raise GraphError("first P-tooth is not locked to any Q-tooth")
    if len(partners) > 1:
        raise GraphError(f"first P-tooth is locked to several Q-teeth {partners}")
    return partners[0] - 1


@dataclass
class ZipperReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def holds(self, prop: str) -> bool:
        return all(p != prop for p, _ in self.violations)


def check_zipper_properties(gdt: ZipperGadget, fill: Iterable[Edge]) -> ZipperReport:
    """Check the structural zipper properties (i)-(vi) on ``gadget + fill``.

    Properties (i)-(iii) are checked with the head and tail appended to P,
    (iv)-(vi) on the bare chain.
    """
    fill = list(fill)
    edges = _edge_lookup(gdt, fill)
    n, lq = gdt.n, len(gdt.q)
    top = 4 * n
    rep = ZipperReport()

    def pq(i: int, j: int) -> bool:
        return norm_edge(gdt.pside(i), gdt.qv(j)) in edges

    for i in range(top + 1):
        for i2 in range(i + 2, top + 1):
            if norm_edge(gdt.pside(i), gdt.pside(i2)) in edges:
                rep.violations.append(("i", (gdt.pside(i), gdt.pside(i2))))
    for j in range(1, lq + 1):
        for j2 in range(j + 2, lq + 1):
            if norm_edge(gdt.qv(j), gdt.qv(j2)) in edges:
                rep.violations.append(("i", (gdt.qv(j), gdt.qv(j2))))

    for i in range(top + 1):
        js = [j for j in range(1, lq + 1) if pq(i, j)]
        if js and js != list(range(js[0], js[-1] + 1)):
            rep.violations.append(("ii", (gdt.pside(i), tuple(gdt.qv(j) for j in js))))
    for j in range(1, lq + 1):
        is_ = [i for i in range(top + 1) if pq(i, j)]
        if is_ and is_ != list(range(is_[0], is_[-1] + 1)):
            rep.violations.append(("ii", (gdt.qv(j), tuple(gdt.pside(i) for i in is_))))

    for i in range(top + 1):
        for j in range(1, lq + 1):
            if not pq(i, j):
                continue
            nxt = []
            if i + 1 <= top:
                nxt.append(pq(i + 1, j))
            if j + 1 <= lq:
                nxt.append(pq(i, j + 1))
            if nxt and not any(nxt):
                rep.violations.append(("iii", (gdt.pside(i), gdt.qv(j))))
            if 1 <= i < top - 1 and j < lq and (i % 2 == 1 or j % 2 == 0):
                if not pq(i + 1, j + 1):
                    rep.violations.append(("iv", (gdt.pside(i), gdt.qv(j))))

    locks = locked_teeth(gdt, fill)
    for t, u in sorted(locks):
        if t + 1 <= n and u + 1 <= n + gdt.s and (t + 1, u + 1) not in locks:
            rep.violations.append(("v", (t, u)))
    for t in range(1, n + 1):
        partners = sorted(u for tt, u in locks if tt == t)
        if len(partners) > 1:
            rep.violations.append(("vi", (t, tuple(partners))))
    return rep

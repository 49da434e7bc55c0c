"""Line-oriented text formats.

Every file starts with a header line naming its kind; ``#`` starts a comment.

graph      ``graph tcg|tmg <n> <num_colors>``, ``vertex <id> <color>*``, ``edge <u> <v>``
           plus free-form ``annot ...`` lines that are kept verbatim
td         ``td <num_bags> <num_vertices>``, ``bag <i> <vertex>*``, ``tedge <a> <b>``
fill       ``fill <u> <v>`` lines
tcmis      ``tcmis <num_nodes> <k>``, ``treeedge``, ``class <node> <color> <size>``,
           ``edge <n1> <c1> <i1> <n2> <c2> <i2>``
pp         ``pp <num_species> <num_genes>``, ``species <name> <variant>*``
solution   ``choose <node> <color> <index>`` lines
phylogeny  ``phylo <num_nodes> <num_genes>``, ``node <i> <variant>*``,
           ``treeedge <a> <b>``, ``leaf <species-index> <node>``
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .graph import Edge, GraphError, MulticoloredGraph, colors_of_mask, norm_edge
from .reductions.phylogeny import PhylogenyInstance, PhylogenyTree
from .reductions.tcmis import TcmisInstance, TcmisSolution
from .treedecomp import GraphRef, TreeDecomposition


class FormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _lines(text: str) -> Iterator[tuple[int, list[str], str]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split(), raw.strip()


def _ints(no: int, toks: list[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise FormatError(no, f"expected integers, got {' '.join(toks)!r}") from None


def _header(text: str, kind: str) -> tuple[int, list[str], Iterator]:
    it = _lines(text)
    try:
        no, toks, _ = next(it)
    except StopIteration:
        raise FormatError(1, f"empty input, expected a '{kind}' header") from None
    if toks[0] != kind:
        raise FormatError(no, f"expected a '{kind}' header, found {toks[0]!r}")
    return no, toks[1:], it


def sniff(text: str) -> str:
    for _, toks, _ in _lines(text):
        return toks[0]
    return ""


# --- graphs ---------------------------------------------------------------


def parse_graph(text: str) -> tuple[MulticoloredGraph, list[str]]:
    no, args, it = _header(text, "graph")
    if len(args) != 3 or args[0] not in ("tcg", "tmg"):
        raise FormatError(no, "header must be 'graph tcg|tmg <n> <num_colors>'")
    mode = args[0]
    n, num_colors = _ints(no, args[1:])
    colors: list = [None] * n
    edges = []
    annots = []
    for no, toks, raw in it:
        tag = toks[0]
        if tag == "annot":
            annots.append(raw[len("annot"):].strip())
        elif tag == "vertex":
            vals = _ints(no, toks[1:])
            if not vals or not 0 <= vals[0] < n:
                raise FormatError(no, "vertex id missing or out of range")
            if colors[vals[0]] is not None:
                raise FormatError(no, f"vertex {vals[0]} declared twice")
            if any(not 0 <= c < num_colors for c in vals[1:]):
                raise FormatError(no, f"color outside [0, {num_colors})")
            colors[vals[0]] = vals[1:]
        elif tag == "edge":
            vals = _ints(no, toks[1:])
            if len(vals) != 2 or not all(0 <= v < n for v in vals) or vals[0] == vals[1]:
                raise FormatError(no, "edge needs two distinct vertex ids in range")
            edges.append((vals[0], vals[1]))
        else:
            raise FormatError(no, f"unknown record {tag!r}")
    missing = [v for v in range(n) if colors[v] is None]
    if missing:
        raise FormatError(no, f"vertices {missing[:5]} never declared")
    try:
        g = MulticoloredGraph.build(colors, edges, mode=mode, num_colors=num_colors)
    except GraphError as exc:
        raise FormatError(no, str(exc)) from None
    if mode == "tcg" and len(g.used_colors) != num_colors:
        raise FormatError(1, f"tcg header declares {num_colors} colors but {g.k} are used")
    return g, annots


def format_graph(g: MulticoloredGraph, annots: Iterable[str] = ()) -> str:
    out = [f"graph {g.mode} {g.n} {g.num_colors}"]
    out += [f"annot {a}" for a in annots]
    for v in g.vertices:
        out.append(" ".join(["vertex", str(v), *map(str, colors_of_mask(g.masks[v]))]))
    out += [f"edge {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(out) + "\n"


# --- decompositions and fills ----------------------------------------------


def parse_td(text: str) -> TreeDecomposition:
    no, args, it = _header(text, "td")
    if len(args) != 2:
        raise FormatError(no, "header must be 'td <num_bags> <num_vertices>'")
    count, n = _ints(no, args)
    bags: list = [None] * count
    edges = []
    for no, toks, _ in it:
        vals = _ints(no, toks[1:])
        if toks[0] == "bag":
            if not vals or not 0 <= vals[0] < count:
                raise FormatError(no, "bag id missing or out of range")
            if bags[vals[0]] is not None:
                raise FormatError(no, f"bag {vals[0]} declared twice")
            if any(not 0 <= v < n for v in vals[1:]):
                raise FormatError(no, f"vertex outside [0, {n})")
            bags[vals[0]] = vals[1:]
        elif toks[0] == "tedge":
            if len(vals) != 2 or not all(0 <= b < count for b in vals):
                raise FormatError(no, "tedge needs two bag ids in range")
            edges.append((vals[0], vals[1]))
        else:
            raise FormatError(no, f"unknown record {toks[0]!r}")
    if any(b is None for b in bags):
        raise FormatError(no, "some bag ids are never declared")
    td = TreeDecomposition.make(bags, edges)
    return TreeDecomposition(td.bags, td.tree_edges, GraphRef(n))


def format_td(td: TreeDecomposition) -> str:
    n = td.ref.n if td.ref is not None else 1 + max((v for b in td.bags for v in b), default=-1)
    out = [f"td {len(td.bags)} {n}"]
    for i, bag in enumerate(td.bags):
        out.append(" ".join(["bag", str(i), *map(str, sorted(bag))]))
    out += [f"tedge {a} {b}" for a, b in sorted(td.tree_edges)]
    return "\n".join(out) + "\n"


def parse_fill(text: str) -> frozenset[Edge]:
    edges = set()
    for no, toks, _ in _lines(text):
        vals = _ints(no, toks[1:])
        if toks[0] != "fill" or len(vals) != 2 or vals[0] == vals[1]:
            raise FormatError(no, "expected 'fill <u> <v>'")
        edges.add(norm_edge(*vals))
    return frozenset(edges)


def format_fill(fill: Iterable[Edge]) -> str:
    return "".join(f"fill {u} {v}\n" for u, v in sorted(norm_edge(a, b) for a, b in fill))


# --- TCMIS -------------------------------------------------------------------


def parse_tcmis(text: str) -> TcmisInstance:
    no, args, it = _header(text, "tcmis")
    if len(args) != 2:
        raise FormatError(no, "header must be 'tcmis <num_nodes> <k>'")
    num_nodes, k = _ints(no, args)
    tree, sizes, edges = [], {}, []
    for no, toks, _ in it:
        vals = _ints(no, toks[1:])
        tag = toks[0]
        if tag == "treeedge" and len(vals) == 2:
            tree.append((vals[0], vals[1]))
        elif tag == "class" and len(vals) == 3:
            if (vals[0], vals[1]) in sizes:
                raise FormatError(no, f"class ({vals[0]}, {vals[1]}) declared twice")
            sizes[(vals[0], vals[1])] = vals[2]
        elif tag == "edge" and len(vals) == 6:
            edges.append((tuple(vals[:3]), tuple(vals[3:])))
        else:
            raise FormatError(no, f"malformed record {' '.join(toks)!r}")
    try:
        return TcmisInstance(num_nodes, k, tuple(tree), sizes, tuple(edges))
    except GraphError as exc:
        raise FormatError(no, str(exc)) from None


def format_tcmis(inst: TcmisInstance) -> str:
    out = [f"tcmis {inst.num_nodes} {inst.k}"]
    out += [f"treeedge {a} {b}" for a, b in inst.tree_edges]
    out += [f"class {n} {c} {s}" for (n, c), s in sorted(inst.class_sizes.items())]
    out += ["edge " + " ".join(map(str, (*a, *b))) for a, b in inst.edges]
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> TcmisSolution:
    sol: TcmisSolution = {}
    for no, toks, _ in _lines(text):
        vals = _ints(no, toks[1:])
        if toks[0] != "choose" or len(vals) != 3:
            raise FormatError(no, "expected 'choose <node> <color> <index>'")
        sol[(vals[0], vals[1])] = vals[2]
    return sol


def format_solution(sol: TcmisSolution) -> str:
    return "".join(f"choose {n} {c} {i}\n" for (n, c), i in sorted(sol.items()))


# --- phylogeny ---------------------------------------------------------------


def parse_pp(text: str) -> PhylogenyInstance:
    no, args, it = _header(text, "pp")
    if len(args) != 2:
        raise FormatError(no, "header must be 'pp <num_species> <num_genes>'")
    num_species, num_genes = _ints(no, args)
    names, rows = [], []
    for no, toks, _ in it:
        if toks[0] != "species" or len(toks) != num_genes + 2:
            raise FormatError(no, f"expected 'species <name>' and {num_genes} variant ids")
        names.append(toks[1])
        rows.append(tuple(_ints(no, toks[2:])))
    if len(rows) != num_species:
        raise FormatError(no, f"header promises {num_species} species, found {len(rows)}")
    try:
        return PhylogenyInstance(num_genes, tuple(rows), tuple(names))
    except GraphError as exc:
        raise FormatError(no, str(exc)) from None


def format_pp(inst: PhylogenyInstance) -> str:
    out = [f"pp {len(inst.species)} {inst.num_genes}"]
    out += [" ".join(["species", name, *map(str, s)]) for name, s in zip(inst.names, inst.species)]
    return "\n".join(out) + "\n"


def parse_phylogeny(text: str) -> PhylogenyTree:
    no, args, it = _header(text, "phylo")
    if len(args) != 2:
        raise FormatError(no, "header must be 'phylo <num_nodes> <num_genes>'")
    count, num_genes = _ints(no, args)
    nodes: list = [None] * count
    edges, leaves = set(), {}
    for no, toks, _ in it:
        vals = _ints(no, toks[1:])
        if toks[0] == "node" and len(vals) == num_genes + 1 and 0 <= vals[0] < count:
            nodes[vals[0]] = tuple(vals[1:])
        elif toks[0] == "treeedge" and len(vals) == 2:
            edges.add(norm_edge(*vals))
        elif toks[0] == "leaf" and len(vals) == 2:
            leaves[vals[0]] = vals[1]
        else:
            raise FormatError(no, f"malformed record {' '.join(toks)!r}")
    if any(x is None for x in nodes):
        raise FormatError(no, "some node ids are never declared")
    return PhylogenyTree(tuple(nodes), frozenset(edges), leaves)


def format_phylogeny(tree: PhylogenyTree) -> str:
    genes = len(tree.nodes[0]) if tree.nodes else 0
    out = [f"phylo {len(tree.nodes)} {genes}"]
    out += [" ".join(["node", str(i), *map(str, x)]) for i, x in enumerate(tree.nodes)]
    out += [f"treeedge {a} {b}" for a, b in sorted(tree.edges)]
    out += [f"leaf {s} {v}" for s, v in sorted(tree.leaf_map.items())]
    return "\n".join(out) + "\n"


# --- DOT -------------------------------------------------------------------------


def gadget_dot(g: MulticoloredGraph, labels: dict[int, str], fill: Iterable[Edge] = (),
               pos: Optional[dict[int, tuple[float, float]]] = None) -> str:
    """Undirected DOT; base edges black, fill edges red."""
    out = ["graph gadget {", "  node [shape=circle, fontsize=10];"]
    for v in g.vertices:
        cols = ",".join(map(str, colors_of_mask(g.masks[v])))
        attrs = [f'label="{labels.get(v, v)}\\n{cols}"']
        if pos and v in pos:
            attrs.append(f'pos="{pos[v][0]:g},{pos[v][1]:g}!"')
        out.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in sorted(g.edges):
        out.append(f"  {u} -- {v};")
    for u, v in sorted(norm_edge(a, b) for a, b in fill):
        out.append(f"  {u} -- {v} [color=red];")
    out.append("}")
    return "\n".join(out) + "\n"

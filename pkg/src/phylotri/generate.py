"""Seeded random instance generators for tests, benchmarks and sweeps."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import MulticoloredGraph
from .reductions.phylogeny import PhylogenyInstance
from .reductions.tcmis import TcmisInstance


def random_colored_graph(rng: random.Random, n: int, p: float = 0.4,
                         num_colors: int | None = None) -> MulticoloredGraph:
    """Random graph with every one of ``num_colors`` colors used at least once."""
    c = num_colors if num_colors is not None else rng.randint(1, n)
    colors = list(range(c)) + [rng.randrange(c) for _ in range(n - c)]
    rng.shuffle(colors)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return MulticoloredGraph.colored(colors, edges)


def random_pp(rng: random.Random, species: int, genes: int, states: int = 2) -> PhylogenyInstance:
    """Rows drawn uniformly then deduplicated, so fewer than ``species`` may remain."""
    rows = []
    seen = set()
    for _ in range(species):
        row = tuple(rng.randrange(states) for _ in range(genes))
        if row not in seen:
            seen.add(row)
            rows.append(row)
    return PhylogenyInstance(genes, tuple(rows))


@dataclass(frozen=True)
class TcmisShape:
    max_nodes: int = 3
    max_k: int = 2
    max_r: int = 1
    max_m: int = 2


def random_tcmis(rng: random.Random, shape: TcmisShape = TcmisShape()) -> TcmisInstance:
    nn = rng.randint(1, shape.max_nodes)
    k = rng.randint(1, shape.max_k)
    tree = []
    degree = [0] * nn
    for i in range(1, nn):
        parent = rng.choice([x for x in range(i) if degree[x] < 3])
        tree.append((i, parent))
        degree[i] += 1
        degree[parent] += 1
    adj: dict[int, set[int]] = {x: set() for x in range(nn)}
    for a, b in tree:
        adj[a].add(b)
        adj[b].add(a)
    sizes = {}
    for node in range(nn):
        for c in range(rng.randint(1, k)):
            sizes[(node, c)] = rng.randint(1, shape.max_r + 1)
    verts = sorted((n, c, i) for (n, c), s in sizes.items() for i in range(s))
    cands = [(a, b) for a in verts for b in verts if a < b and (
        (a[0] == b[0] and a[1] != b[1]) or b[0] in adj[a[0]])]
    m = min(len(cands), rng.randint(0, shape.max_m))
    return TcmisInstance(nn, k, tuple(tree), sizes, tuple(rng.sample(cands, m)))

"""Hypothesis strategies shared across the test modules."""

from hypothesis import strategies as st

from phylotri.graph import MulticoloredGraph


@st.composite
def colored_graphs(draw, max_n=7, max_colors=3, connected=False):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, min(max_colors, n)))
    colors = list(range(k)) + draw(st.lists(st.integers(0, k - 1), min_size=n - k, max_size=n - k))
    colors = draw(st.permutations(colors))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    if connected:
        for v in range(1, n):
            edges.append((draw(st.integers(0, v - 1)), v))
    return MulticoloredGraph.colored(colors, edges)


@st.composite
def multicolored_graphs(draw, max_n=6, max_colors=3, max_per_vertex=2):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_colors))
    color_sets = [
        draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=max_per_vertex)) for _ in range(n)
    ]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    return MulticoloredGraph.build(color_sets, edges, num_colors=k)


@st.composite
def binary_species(draw, max_species=6, max_genes=5):
    genes = draw(st.integers(1, max_genes))
    rows = draw(st.sets(st.tuples(*[st.integers(0, 1)] * genes), min_size=1, max_size=max_species))
    return genes, sorted(rows)

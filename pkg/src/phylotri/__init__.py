"""Chromatic triangulation solving, zipper gadgets and the reductions around them."""

from .graph import (
    GraphError,
    MulticoloredGraph,
    components_after_removal,
    is_chordal,
    is_properly_multicolored,
    verify_triangulation,
)
from .solver import SolverTimeout, solve_pp, solve_tcg, solve_tmg
from .treedecomp import (
    DecompositionError,
    TreeDecomposition,
    color_multiplicity_ok,
    normalize_exactly_once,
    treedecomp_to_triangulation,
    triangulation_to_treedecomp,
    verify_tree_decomposition,
)
from .zipper import (
    ZipperColors,
    ZipperGadget,
    build_zipper_chain,
    build_zipper_gadget,
    canonical_gadget_triangulation,
    enumerate_gadget_triangulations,
    read_gadget_offset,
)

__version__ = "0.1.0"

__all__ = [
    "DecompositionError",
    "GraphError",
    "MulticoloredGraph",
    "SolverTimeout",
    "TreeDecomposition",
    "ZipperColors",
    "ZipperGadget",
    "build_zipper_chain",
    "build_zipper_gadget",
    "canonical_gadget_triangulation",
    "color_multiplicity_ok",
    "components_after_removal",
    "enumerate_gadget_triangulations",
    "is_chordal",
    "is_properly_multicolored",
    "normalize_exactly_once",
    "read_gadget_offset",
    "solve_pp",
    "solve_tcg",
    "solve_tmg",
    "treedecomp_to_triangulation",
    "triangulation_to_treedecomp",
    "verify_tree_decomposition",
    "verify_triangulation",
]

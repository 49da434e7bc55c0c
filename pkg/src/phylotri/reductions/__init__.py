"""Constructive reductions between the triangulation problems."""

from .multicolor import CliqueProvenance, lift_tcg_decomposition_to_tmg, reduce_tmg_to_tcg
from .phylogeny import (
    PhylogenyInstance,
    PhylogenyTree,
    PPProvenance,
    extract_phylogeny,
    reduce_pp_to_tcg,
)
from .tcmis import (
    BuildError,
    Merge,
    ReductionConfig,
    TcmisInstance,
    TcmisProvenance,
    build_tmg_decomposition_from_tcmis_solution,
    extract_tcmis_solution,
    reduce_tcmis_to_tmg,
    two_gadget_mechanism,
)

__all__ = [
    "BuildError",
    "Merge",
    "CliqueProvenance",
    "PPProvenance",
    "PhylogenyInstance",
    "PhylogenyTree",
    "ReductionConfig",
    "TcmisInstance",
    "TcmisProvenance",
    "build_tmg_decomposition_from_tcmis_solution",
    "extract_phylogeny",
    "extract_tcmis_solution",
    "lift_tcg_decomposition_to_tmg",
    "reduce_pp_to_tcg",
    "reduce_tcmis_to_tmg",
    "reduce_tmg_to_tcg",
    "two_gadget_mechanism",
]

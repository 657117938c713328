"""Finite combinatorial topology: simplicial sets, subdivision, path-space models and affine Coxeter complexes."""

from .homology import ChainComplex, HomologyGroup, homology, reduced_homology, sset_homology
from .sset import SimplicialComplex, SMap, SSet, TrustError, from_complex, standard_simplex

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "HomologyGroup",
    "SMap",
    "SSet",
    "SimplicialComplex",
    "TrustError",
    "from_complex",
    "homology",
    "reduced_homology",
    "sset_homology",
    "standard_simplex",
]

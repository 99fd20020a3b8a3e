"""Exact cell-attachment calculus over the integers and path algebras of quivers."""
from .approximation import AislePredicate, approximate, cell_attachment_step, weight_decomposition
from .base import BaseCategory, Morphism, Quiver
from .complexes import (BoundedComplex, ChainMap, Triangle, cone, direct_sum, find_homotopy,
                        homology, is_quasi_iso, shift)
from .counterexample import minimal_depth, obstruct, power_tower
from .derived import derived_hom, hom_window
from .errors import (ComplexError, DerivedCellsError, HypothesisFailed, LiftFailed,
                     MalformedInput, NoCertificate, OrthogonalityFailed, ReplayFailed,
                     VanishingPreconditionFailed)
from .linalg import GF, ZZ, ExactMatrix, FGAbelianGroup, cokernel_invariants, smith_normal_form, solve
from .modules import cyclic_group, indecomposable_projective, simple_module
from .negativity import (Generator, GeneratorSystem, check_negativity,
                         verify_orthogonality_propagation)
from .towers import (Leaf, Node, annihilation_certificate, octahedral_rebracket,
                     rebracket_extension_of_stars)

__all__ = [
    "AislePredicate", "approximate", "cell_attachment_step", "weight_decomposition",
    "BaseCategory", "Morphism", "Quiver",
    "BoundedComplex", "ChainMap", "Triangle", "cone", "direct_sum", "find_homotopy", "homology",
    "is_quasi_iso", "shift",
    "minimal_depth", "obstruct", "power_tower",
    "derived_hom", "hom_window",
    "ComplexError", "DerivedCellsError", "HypothesisFailed", "LiftFailed", "MalformedInput",
    "NoCertificate", "OrthogonalityFailed", "ReplayFailed", "VanishingPreconditionFailed",
    "GF", "ZZ", "ExactMatrix", "FGAbelianGroup", "cokernel_invariants", "smith_normal_form", "solve",
    "cyclic_group", "indecomposable_projective", "simple_module",
    "Generator", "GeneratorSystem", "check_negativity", "verify_orthogonality_propagation",
    "Leaf", "Node", "annihilation_certificate", "octahedral_rebracket",
    "rebracket_extension_of_stars",
]

"""Quiver settings, flat loci of Brauer-Severi fibrations and their fibers."""

from .cofree_classifier import apply_RcI, is_cofree, match_cofree_family, reduce_fully
from .fiber_model import compute_Nw, fiber_description, gamma_graph, nullcone_components
from .flat_locus import classify_point, is_flat_local_setting, singular_shape_check
from .quiver_core import (
    Quiver,
    QuiverSetting,
    chi,
    count_quasiprimitive_cycles_through,
    euler_matrix,
    is_strongly_connected,
    prime_components,
    validate,
)
from .rep_theory import (
    DecompositionType,
    LocalQuiverData,
    enumerate_decompositions,
    enumerate_simple_subdimvectors,
    has_simple_reps,
    is_reduced,
    local_quiver,
)
from .toric_geometry import (
    betti_numbers,
    build_fan,
    cohomology_presentation,
    connecting_subquivers,
    extend,
    toric_model,
    verify_fan,
)

__version__ = "0.1.0"

__all__ = [
    "DecompositionType", "LocalQuiverData", "Quiver", "QuiverSetting", "apply_RcI",
    "betti_numbers", "build_fan", "chi", "classify_point", "cohomology_presentation",
    "compute_Nw", "connecting_subquivers", "count_quasiprimitive_cycles_through",
    "enumerate_decompositions", "enumerate_simple_subdimvectors", "euler_matrix", "extend",
    "fiber_description", "gamma_graph", "has_simple_reps", "is_cofree",
    "is_flat_local_setting", "is_reduced", "is_strongly_connected", "local_quiver",
    "match_cofree_family", "nullcone_components", "prime_components", "reduce_fully",
    "singular_shape_check", "toric_model", "validate", "verify_fan",
]

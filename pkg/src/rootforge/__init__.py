"""Involutive Heegaard Floer correction terms of almost-rational plumbings."""

from .connected_sum import (
    OrientedSummand,
    SumSpec,
    independence_certificate,
    mixed_sum_invariants,
    self_sum,
    sum_correction_terms,
)
from .graded_root import (
    GradedRoot,
    MonotoneRoot,
    SymmetricGradedRoot,
    build_monotone,
    hfi_root_diagram,
    monotone_params,
    monotone_subroot,
    root_correction_terms,
)
from .iota_complex import (
    FreeComplex,
    IotaComplex,
    UPoly,
    connected_sum_complex,
    dual,
    fu_homology,
    involutive_homology_via_root,
    involutive_invariants,
    mapping_cone,
    standard_complex,
    verify_iota_complex,
)
from .lattice import (
    chi_value,
    d_invariant,
    graded_root_from_plumbing,
    minimum_chi,
    sublevel_points,
)
from .plumbing import (
    brieskorn_graph,
    build_tree,
    check_almost_rational,
    intersection_form,
    is_negative_definite,
    neg_continued_fraction,
    neumann_siebenmann,
    seifert_graph,
    self_conjugate_spinc,
)

__version__ = "0.1.0"

__all__ = [
    "OrientedSummand",
    "SumSpec",
    "independence_certificate",
    "mixed_sum_invariants",
    "self_sum",
    "sum_correction_terms",
    "GradedRoot",
    "MonotoneRoot",
    "SymmetricGradedRoot",
    "build_monotone",
    "hfi_root_diagram",
    "monotone_params",
    "monotone_subroot",
    "root_correction_terms",
    "FreeComplex",
    "IotaComplex",
    "UPoly",
    "connected_sum_complex",
    "dual",
    "fu_homology",
    "involutive_homology_via_root",
    "involutive_invariants",
    "mapping_cone",
    "standard_complex",
    "verify_iota_complex",
    "chi_value",
    "d_invariant",
    "graded_root_from_plumbing",
    "minimum_chi",
    "sublevel_points",
    "brieskorn_graph",
    "build_tree",
    "check_almost_rational",
    "intersection_form",
    "is_negative_definite",
    "neg_continued_fraction",
    "neumann_siebenmann",
    "seifert_graph",
    "self_conjugate_spinc",
]

"""Exceptional collections of line bundles on the toric family X(n, b)."""

from .cohomology import (
    EngineLimitError,
    cohomology_dims,
    forbidden_subsets,
    h0,
    is_acyclic_closed_form,
    is_acyclic_oracle,
)
from .collection import Collection, check_strongly_exceptional, the_collection, verify_all, verify_full
from .divisors import DivisorClass, alpha_to_class, class_group, reduce
from .fan import Fan, FamilyParams, build_family_fan, is_complete, is_smooth, primitive_collections
from .frobenius import bondal_set, pushforward_split, saturation_scan

__all__ = [
    "EngineLimitError", "cohomology_dims", "forbidden_subsets", "h0", "is_acyclic_closed_form",
    "is_acyclic_oracle", "Collection", "check_strongly_exceptional", "the_collection", "verify_all",
    "verify_full", "DivisorClass", "alpha_to_class", "class_group", "reduce", "Fan", "FamilyParams",
    "build_family_fan", "is_complete", "is_smooth", "primitive_collections", "bondal_set",
    "pushforward_split", "saturation_scan",
]

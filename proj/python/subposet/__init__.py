"""Exact Lubell-function and forbidden-subposet search machinery.

The heavy lifting lives in the compiled extension; this package re-exports
its surface. Lubell masses, bounds, and block averages come back as
``fractions.Fraction`` so every comparison stays exact.
"""

from subposet._core import (  # noqa: F401
    PosetPattern,
    SetFamily,
    binomial,
    canonical_form,
    conjugate,
    construct_c1,
    construct_c2,
    construct_c3,
    diamond_free_fast,
    dk_bounds,
    e_lower,
    enumerate_maximal_pfree,
    family_height,
    family_to_string,
    find_family_of_size,
    height,
    interval_count,
    is_pattern_free,
    la_exact,
    load_family,
    lubell,
    lubell_monte_carlo,
    lubell_size_bound,
    lubell_via_chains,
    max_lubell,
    middle_levels,
    min_partition,
    minmax_partition,
    partition_by_deleted_element,
    pattern_to_string,
    sigma,
    verify_extremal_uniqueness,
)

__all__ = [
    "PosetPattern",
    "SetFamily",
    "binomial",
    "canonical_form",
    "conjugate",
    "construct_c1",
    "construct_c2",
    "construct_c3",
    "diamond_free_fast",
    "dk_bounds",
    "e_lower",
    "enumerate_maximal_pfree",
    "family_height",
    "family_to_string",
    "find_family_of_size",
    "height",
    "interval_count",
    "is_pattern_free",
    "la_exact",
    "load_family",
    "lubell",
    "lubell_monte_carlo",
    "lubell_size_bound",
    "lubell_via_chains",
    "max_lubell",
    "middle_levels",
    "min_partition",
    "minmax_partition",
    "partition_by_deleted_element",
    "pattern_to_string",
    "sigma",
    "verify_extremal_uniqueness",
]

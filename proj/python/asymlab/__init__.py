"""Numerical laboratory for asymptotic limits of power-bounded operators.

The heavy lifting lives in the compiled extension; this package re-exports
its operations: Hermitian spectral tools, asymptotic limits and their
almost-convergence surrogates, similarity-to-unitary tests with certificates,
closed-form weighted bilateral shift analysis, and the inverse construction
of a contraction with a prescribed asymptotic limit.
"""

from ._core import (
    SCHEMA,
    AsymlabError,
    __version__,
    asymptotic_limit,
    asymptotic_report,
    asymptotic_surrogate,
    block_upper_inverse,
    class_q_predicate,
    classify,
    classify_shift,
    construct,
    dichotomy_probe,
    gamma_alternative_test,
    herm_eig,
    intertwiner_to_isometry,
    kerchy_decompose,
    paranormal_sampled_predicate,
    power_profile,
    psd_sqrt,
    psd_sqrt_and_invsqrt,
    reduced_min_modulus,
    run_acceptance,
    shift_matrix,
    similarity_invariance_check,
    spectral_subspace,
    stable_subspace,
    sum_analysis,
    sznagy_isometry_test,
    sznagy_unitary_test,
    unitary_conjugation_check,
    validate_target,
)

__all__ = [
    "SCHEMA",
    "AsymlabError",
    "__version__",
    "asymptotic_limit",
    "asymptotic_report",
    "asymptotic_surrogate",
    "block_upper_inverse",
    "class_q_predicate",
    "classify",
    "classify_shift",
    "construct",
    "dichotomy_probe",
    "gamma_alternative_test",
    "herm_eig",
    "intertwiner_to_isometry",
    "kerchy_decompose",
    "paranormal_sampled_predicate",
    "power_profile",
    "psd_sqrt",
    "psd_sqrt_and_invsqrt",
    "reduced_min_modulus",
    "run_acceptance",
    "shift_matrix",
    "similarity_invariance_check",
    "spectral_subspace",
    "stable_subspace",
    "sum_analysis",
    "sznagy_isometry_test",
    "sznagy_unitary_test",
    "unitary_conjugation_check",
    "validate_target",
]

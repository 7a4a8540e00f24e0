"""sepcert: separability certification for density matrices.

Realigns density matrices on tensor-product spaces, decomposes the result
into rank-one partial isometries via the SVD, and turns positive
semidefinite singular pairs into explicit separability certificates.
Independent necessary criteria (partial transposition, realignment trace
norm) provide entanglement witnesses and cross-validation.
"""

from .criteria import (
    ConicDecomposition,
    ConicTerm,
    FullSeparabilityResult,
    InternalConsistencyError,
    ProductCheck,
    PptResult,
    RealignmentResult,
    SeparabilityCertificate,
    SeparabilityVerdict,
    Status,
    Witness,
    analyze,
    certify_fully_separable,
    certify_separable_bipartite,
    check_product_bipartite,
    check_product_multipartite,
    is_extremal_form,
    ppt_criterion,
    realignment_criterion,
    svd_conic_decomposition,
)
from .linalg import (
    DEFAULT_TOLERANCES,
    NumericalError,
    PsdCheck,
    SvdResult,
    Tolerances,
    is_psd,
    kron,
    mat,
    partial_transpose,
    svd,
    vec,
    vec_permutation,
    weyl,
)
from .multipartite import (
    block_k,
    parse_partition,
    permute_subsystems,
    regroup,
    tilde_k,
)
from .states import (
    DensityMatrix,
    PureState,
    bell,
    ghz,
    maximally_mixed,
    pure_to_density,
    random_density,
    random_separable,
    werner,
    zero_plus_mixture,
)
from .tilde import CONVENTIONS, DEFAULT_CONVENTION, block, inverse_tilde, tilde

__version__ = "0.1.0"

__all__ = [
    "CONVENTIONS",
    "DEFAULT_CONVENTION",
    "DEFAULT_TOLERANCES",
    "ConicDecomposition",
    "ConicTerm",
    "DensityMatrix",
    "FullSeparabilityResult",
    "InternalConsistencyError",
    "NumericalError",
    "PptResult",
    "ProductCheck",
    "PsdCheck",
    "PureState",
    "RealignmentResult",
    "SeparabilityCertificate",
    "SeparabilityVerdict",
    "Status",
    "SvdResult",
    "Tolerances",
    "Witness",
    "analyze",
    "bell",
    "block",
    "block_k",
    "certify_fully_separable",
    "certify_separable_bipartite",
    "check_product_bipartite",
    "check_product_multipartite",
    "ghz",
    "inverse_tilde",
    "is_extremal_form",
    "is_psd",
    "kron",
    "mat",
    "maximally_mixed",
    "parse_partition",
    "partial_transpose",
    "permute_subsystems",
    "ppt_criterion",
    "pure_to_density",
    "random_density",
    "random_separable",
    "realignment_criterion",
    "regroup",
    "svd",
    "svd_conic_decomposition",
    "tilde",
    "tilde_k",
    "vec",
    "vec_permutation",
    "werner",
    "weyl",
    "zero_plus_mixture",
]

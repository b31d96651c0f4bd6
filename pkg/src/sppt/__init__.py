"""Strong-PPT factorization, classification and separable decomposition of bipartite states."""

from .basis import HADAMARD, SearchResult, local_unitary_A, local_unitary_B, random_basis_search
from .classification import Classification, classify, is_ppt, is_sppt, is_super_sppt
from .decomposition import (
    JointSpectrum,
    ProductTerm,
    SeparableDecomposition,
    VerificationReport,
    joint_eigenbasis,
    separable_decomposition,
    verify_decomposition,
)
from .factorization import BlockFactor, assemble_X, assemble_Y, block_cholesky, gauge
from .linalg import EigenSystem, hermitian_eig, partial_transpose, pseudo_inverse, psd_sqrt
from .states import (
    BipartiteState,
    cc_state,
    cq_state,
    from_factor,
    random_density,
    random_super_sppt,
    werner,
)

__all__ = [
    "HADAMARD", "BipartiteState", "BlockFactor", "Classification", "EigenSystem", "JointSpectrum",
    "ProductTerm", "SearchResult", "SeparableDecomposition", "VerificationReport", "assemble_X",
    "assemble_Y", "block_cholesky", "cc_state", "classify", "cq_state", "from_factor", "gauge",
    "hermitian_eig", "is_ppt", "is_sppt", "is_super_sppt", "joint_eigenbasis", "local_unitary_A",
    "local_unitary_B", "partial_transpose", "pseudo_inverse", "psd_sqrt", "random_basis_search",
    "random_density", "random_super_sppt", "separable_decomposition", "verify_decomposition", "werner",
]

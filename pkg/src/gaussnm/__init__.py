"""Divisibility-based non-Markovianity of Gaussian quantum channels."""

from .channels import (
    AugmentedMap,
    CovarianceState,
    GaussianChannel,
    apply,
    augmented_compose,
    compose,
    cp_matrix,
    devectorize,
    identity_channel,
    is_cp,
    to_augmented,
    vacuum,
    vectorize,
)
from .divisibility import (
    ChannelFamily,
    IllConditionedWarning,
    IntermediateMap,
    NegativitySample,
    NMReport,
    intermediate_map,
    is_markovian,
    negativity_rate,
    nm_matrix,
    total_nm,
)
from .linalg import HermitianMatrix, hermitian_eigenvalues, is_psd, kron, pseudo_inverse, symplectic_form

__version__ = "0.1.0"

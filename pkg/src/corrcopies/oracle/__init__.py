"""Dense brute-force oracle for cross-checking the closed forms at small N."""

from corrcopies.oracle.basis import CoupledBasis, build_coupled_basis
from corrcopies.oracle.dense import (
    DenseState,
    ProductDecomposition,
    partial_trace_keep,
    permutation_residual,
    qubit_bloch,
    schur_to_dense,
    sector_weights_of_product,
)
from corrcopies.oracle.povm import (
    ReflectionRule,
    SphereQuadrature,
    covariant_povm_fidelity,
    povm_completeness_residual,
    sphere_quadrature,
    verify_covariance,
)

__all__ = [
    "CoupledBasis",
    "DenseState",
    "ProductDecomposition",
    "ReflectionRule",
    "SphereQuadrature",
    "build_coupled_basis",
    "covariant_povm_fidelity",
    "partial_trace_keep",
    "permutation_residual",
    "povm_completeness_residual",
    "qubit_bloch",
    "schur_to_dense",
    "sector_weights_of_product",
    "sphere_quadrature",
    "verify_covariance",
]

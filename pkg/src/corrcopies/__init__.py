"""Optimal direction estimation on permutation-invariant N-qubit states.

Closed-form fidelities, constructors for optimal correlated states and a
dense brute-force oracle used to cross-check them at small N.
"""

from corrcopies.errors import DomainError, ResourceError
from corrcopies.spin_algebra import (
    BlochVector,
    SchurState,
    SectorState,
    SpinSector,
    reduce_full,
    sector_multiplicity,
    sector_reduced_density,
    validate_schur_state,
)
from corrcopies.fidelity import (
    Structure,
    asymptotic_fidelity,
    f_known,
    f_known_optimal,
    f_prod,
    f_sym,
    f_unknown,
    shrink_cloning,
)
from corrcopies.optimal_states import (
    StateFamily,
    StateKind,
    canonical_sym_state,
    check_constraints,
    known_opt_state,
    unknown_opt_state,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "DomainError",
    "ResourceError",
    "SchurState",
    "SectorState",
    "SpinSector",
    "StateFamily",
    "StateKind",
    "Structure",
    "asymptotic_fidelity",
    "canonical_sym_state",
    "check_constraints",
    "f_known",
    "f_known_optimal",
    "f_prod",
    "f_sym",
    "f_unknown",
    "known_opt_state",
    "reduce_full",
    "sector_multiplicity",
    "sector_reduced_density",
    "shrink_cloning",
    "unknown_opt_state",
    "validate_schur_state",
]

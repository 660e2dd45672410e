"""Explicit 2^N x 2^N density matrices and their brute-force reductions."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from corrcopies.errors import DomainError, ResourceError
from corrcopies.oracle.basis import MAX_DENSE_QUBITS, CoupledBasis, build_coupled_basis
from corrcopies.spin_algebra import (
    BlochVector,
    SchurState,
    SectorState,
    SpinSector,
    sector_multiplicity,
    sector_reduced_density,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

CASIMIR_GROUPING_TOL = 1e-8
ALPHA_SPREAD_TOL = 1e-9
# sectors lighter than this are treated as empty when normalizing blocks
EMPTY_SECTOR = 1e-13


@dataclass(frozen=True, eq=False)
class DenseState:
    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n > MAX_DENSE_QUBITS:
            raise ResourceError(f"dense states limited to n <= {MAX_DENSE_QUBITS}")
        if self.matrix.shape != (2**self.n, 2**self.n):
            raise DomainError(f"matrix shape {self.matrix.shape} does not match n={self.n}")

    def invariant_residuals(self) -> dict[str, float]:
        m = self.matrix
        return {
            "hermitian": float(np.max(np.abs(m - m.conj().T))),
            "trace": float(abs(np.trace(m) - 1.0)),
            "min_eigenvalue": float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0]),
        }


def _check_size(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"qubit count must be a positive integer, got {n}")
    if n > MAX_DENSE_QUBITS:
        raise ResourceError(f"dense oracle limited to n <= {MAX_DENSE_QUBITS}, got {n}")


def schur_to_dense(state: SchurState, basis: CoupledBasis | None = None) -> DenseState:
    """Embed every sector matrix into each multiplicity copy with weight p_j / d_j."""
    _check_size(state.n)
    if basis is None:
        basis = build_coupled_basis(state.n)
    if basis.n != state.n:
        raise DomainError(f"basis has n={basis.n}, state has n={state.n}")
    dim = 2**state.n
    rho = np.zeros((dim, dim), dtype=complex)
    for p, sector in state.entries:
        if p == 0.0:
            continue
        paths = basis.paths(sector.two_j)
        scale = p / sector_multiplicity(state.n, sector.two_j)
        for path in paths:
            v = basis.blocks[path]
            rho += scale * (v @ sector.lam @ v.conj().T)
    return DenseState(state.n, rho)


def product_state(n: int, bloch) -> DenseState:
    _check_size(n)
    single = single_qubit_matrix(bloch)
    rho = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        rho = np.kron(rho, single)
    return DenseState(n, rho)


def single_qubit_matrix(bloch) -> np.ndarray:
    x, y, z = bloch
    return 0.5 * (np.eye(2) + x * PAULI[0] + y * PAULI[1] + z * PAULI[2])


def partial_trace_keep(state: DenseState, keep: int = 0) -> np.ndarray:
    """Reduced 2x2 density matrix of qubit ``keep`` (0-based)."""
    n = state.n
    t = state.matrix.reshape((2,) * (2 * n))
    others = [k for k in range(n) if k != keep]
    # move the kept qubit's row/col axes to the front, trace the rest pairwise
    t = np.moveaxis(t, [keep, n + keep], [0, 1])
    rest = t.reshape(2, 2, 2 ** len(others), 2 ** len(others))
    return np.einsum("abkk->ab", rest)


def qubit_bloch(rho2: np.ndarray) -> BlochVector:
    return BlochVector(*(float(np.real(np.trace(rho2 @ s))) for s in PAULI))


def transposition_permutation(n: int, i: int) -> np.ndarray:
    """Index permutation of the computational basis swapping qubits i and i+1."""
    idx = np.arange(2**n).reshape((2,) * n)
    return np.swapaxes(idx, i, i + 1).reshape(-1)


def transposition_matrix(n: int, i: int) -> np.ndarray:
    perm = transposition_permutation(n, i)
    return np.eye(2**n)[perm]


def permutation_residual(state: DenseState) -> float:
    """Largest entry of ``P rho P^T - rho`` over all adjacent transpositions."""
    worst = 0.0
    m = state.matrix
    for i in range(state.n - 1):
        perm = transposition_permutation(state.n, i)
        worst = max(worst, float(np.max(np.abs(m[np.ix_(perm, perm)] - m))))
    return worst


@functools.lru_cache(maxsize=None)
def collective_spin(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``J_k = (1/2) sum_i sigma_k^(i)`` as dense 2^N x 2^N matrices."""
    _check_size(n)
    out = []
    for s in PAULI:
        total = np.zeros((2**n, 2**n), dtype=complex)
        for i in range(n):
            op = np.ones((1, 1), dtype=complex)
            for k in range(n):
                op = np.kron(op, s if k == i else np.eye(2))
            total += op
        out.append(total / 2)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def casimir_projectors(n: int) -> dict[int, np.ndarray]:
    """Projectors onto the J^2 eigenspaces, keyed by doubled spin."""
    jx, jy, jz = collective_spin(n)
    casimir = jx @ jx + jy @ jy + jz @ jz
    evals, evecs = np.linalg.eigh(casimir)
    projectors: dict[int, np.ndarray] = {}
    for two_j in range(n % 2, n + 1, 2):
        j = two_j / 2
        mask = np.abs(evals - j * (j + 1)) < CASIMIR_GROUPING_TOL
        v = evecs[:, mask]
        projectors[two_j] = v @ v.conj().T
    if sum(int(round(np.trace(p).real)) for p in projectors.values()) != 2**n:
        raise RuntimeError("J^2 eigenvalues could not be grouped into sectors")
    return projectors


@dataclass
class ProductDecomposition:
    """Sector content of ``rho^{(x) N}`` measured on dense matrices."""

    n: int
    r: float
    weights: dict[int, float]
    lambdas: dict[int, np.ndarray] = field(repr=False)
    sector_lengths: dict[int, float]
    alpha_spread: float
    basis_weight_residual: float

    def as_schur_state(self) -> SchurState:
        sectors = {tj: (self.weights[tj], lam) for tj, lam in self.lambdas.items()}
        return SchurState.from_sectors(self.n, sectors)


def sector_weights_of_product(n: int, r: float, basis: CoupledBasis | None = None) -> ProductDecomposition:
    """Decompose ``rho^{(x) N}`` with ``rho = (1 + r sigma_z)/2`` into sectors.

    Weights come from Casimir eigenprojectors; each sector matrix is read off
    the coupled-basis blocks and must agree across all multiplicity copies.
    """
    _check_size(n)
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"Bloch length must lie in [0, 1], got {r}")
    if basis is None:
        basis = build_coupled_basis(n)
    rho = product_state(n, (0.0, 0.0, r)).matrix
    projectors = casimir_projectors(n)
    weights, lambdas, lengths = {}, {}, {}
    spread = 0.0
    basis_res = 0.0
    for two_j, proj in projectors.items():
        p = float(np.real(np.trace(proj @ rho)))
        weights[two_j] = p
        blocks = [basis.blocks[path].conj().T @ rho @ basis.blocks[path] for path in basis.paths(two_j)]
        total = sum(float(np.real(np.trace(b))) for b in blocks)
        basis_res = max(basis_res, abs(total - p))
        if p <= EMPTY_SECTOR:
            continue
        normed = [b / np.trace(b) for b in blocks]
        lam = normed[0]
        for other in normed[1:]:
            spread = max(spread, float(np.max(np.abs(other - lam))))
        lambdas[two_j] = lam
    for two_j, lam in lambdas.items():
        lengths[two_j] = sector_reduced_density(SectorState(SpinSector(n, two_j), lam)).length
    return ProductDecomposition(n, r, weights, lambdas, lengths, spread, basis_res)

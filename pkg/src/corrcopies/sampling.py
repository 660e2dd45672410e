"""Random valid Schur states, optionally with a prescribed local Bloch length."""

from __future__ import annotations

import numpy as np

from corrcopies.errors import DomainError
from corrcopies.spin_algebra import (
    SchurState,
    SectorState,
    allowed_two_js,
    mix_schur_states,
    reduce_full,
    rotation_from_z,
)


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_sector_matrix(
    two_j: int, axis: np.ndarray, rng: np.random.Generator, pull: float
) -> np.ndarray:
    dim = two_j + 1
    rank = int(rng.integers(1, dim + 1))
    mix = rng.dirichlet(np.ones(rank))
    rot = rotation_from_z(two_j, axis) if two_j else np.eye(1)
    lam = np.zeros((dim, dim), dtype=complex)
    for w in mix:
        # random vector pulled toward the top state along the shared axis
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v *= rng.uniform(0.0, 1.0)
        v[0] += rng.uniform(0.0, pull) * (1 if rng.random() < 0.75 else -1) * np.sqrt(dim)
        v = rot @ v
        v /= np.linalg.norm(v)
        lam += w * np.outer(v, v.conj())
    return lam


def random_schur_state(n: int, rng: np.random.Generator) -> SchurState:
    """Random weights and random PSD sector matrices, loosely aligned to one axis."""
    two_js = allowed_two_js(n)
    concentration = rng.uniform(0.2, 2.0, size=len(two_js))
    # tilt toward high spin by a random amount so long Bloch vectors are reachable
    tilt = np.exp(rng.uniform(0.0, 3.0) * np.array(two_js))
    weights = rng.dirichlet(concentration) * tilt
    weights /= weights.sum()
    pull = rng.uniform(0.0, 8.0)
    axis = _random_unit(rng)
    sectors = {}
    for tj, p in zip(two_js, weights):
        if p < 1e-14:
            continue
        sector_axis = axis if rng.random() < 0.7 else _random_unit(rng)
        sectors[tj] = (p, _random_sector_matrix(tj, sector_axis, rng, pull))
    total = sum(p for p, _ in sectors.values())
    sectors = {tj: (p / total, lam) for tj, (p, lam) in sectors.items()}
    return SchurState.from_sectors(n, sectors)


def unpolarized_state(n: int, rng: np.random.Generator) -> SchurState:
    """Random weights over maximally mixed sectors: zero local Bloch vector."""
    two_js = allowed_two_js(n)
    weights = rng.dirichlet(np.ones(len(two_js)))
    return SchurState(n, tuple((p, SectorState.maximally_mixed(n, tj)) for tj, p in zip(two_js, weights)))


def random_state_with_length(n: int, r: float, rng: np.random.Generator, max_tries: int = 100_000) -> SchurState:
    """Draw random states until one has local Bloch length >= r, then dilute
    it with an unpolarized state so the length is exactly r."""
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"Bloch length must lie in [0, 1], got {r}")
    for _ in range(max_tries):
        state = random_schur_state(n, rng)
        length = reduce_full(state).length
        if length >= r and length > 0.0:
            return mix_schur_states(state, unpolarized_state(n, rng), 1.0 - r / length)
    raise RuntimeError(f"no state with Bloch length >= {r} after {max_tries} draws")
